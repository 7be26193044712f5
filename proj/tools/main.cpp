#include <cstdio>

int main() {
  std::puts("stlc-au: command-line interface not wired up yet");
  return 0;
}
