// Regenerates the frozen R-module tables from free resolutions.
//   regen_tables OUT.json     write
//   regen_tables --check IN   exit 1 unless IN is byte-identical

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "crystalk/oracle.hpp"

int main(int argc, char** argv) {
  const std::string text = crystalk::render_tables(crystalk::oracle::generate_tables());
  if (argc == 3 && std::string(argv[1]) == "--check") {
    std::ifstream f(argv[2], std::ios::binary);
    const std::string frozen{std::istreambuf_iterator<char>(f), {}};
    if (frozen != text) {
      std::cerr << "tables differ from " << argv[2] << "\n";
      return 1;
    }
    std::cout << "tables match " << argv[2] << "\n";
    return 0;
  }
  if (argc != 2) {
    std::cerr << "usage: regen_tables OUT.json | --check IN.json\n";
    return 2;
  }
  std::ofstream(argv[1], std::ios::binary) << text;
  return 0;
}
