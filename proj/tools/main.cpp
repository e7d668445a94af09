// Apache License, Version 2.0, refer to LICENSE.txt

#include "cli.hpp"

int main(int argc, char** argv) {
  return ldakit::cli::run({argv + 1, argv + argc});
}
