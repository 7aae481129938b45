// Experiment runner; full implementation arrives with the experiment module.
#include <cstdio>

int main() {
  std::puts("dmst: not wired up yet");
  return 1;
}
