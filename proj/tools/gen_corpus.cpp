// Writes the corpus files from the builders in tests/support.
//   gen_corpus <dir>

#include <cstdio>
#include <fstream>

#include "corpus.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: gen_corpus <dir>\n");
    return 2;
  }
  for (const auto& e : corpus::all()) {
    std::string path = std::string(argv[1]) + "/" + e.name + ".proof";
    std::ofstream out(path, std::ios::binary);
    out << cidk::serializeProof(e.proof);
    if (!out) {
      std::fprintf(stderr, "cannot write %s\n", path.c_str());
      return 1;
    }
  }
  return 0;
}
