// CLI entry point. Subcommands are filled in as the library lands.
#include <cstdio>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "dncuc: not yet wired up\n");
  return 4;
}
