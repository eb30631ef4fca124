#include <cstdio>

int main() {
  std::puts("smr: command-line interface under construction");
  return 0;
}
