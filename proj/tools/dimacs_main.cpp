// Stand-alone DIMACS front end for the builtin solver, so the subprocess
// backend can be exercised without a third-party solver.
#include <fstream>
#include <iostream>
#include <sstream>

#include "droca/error.hpp"
#include "droca/sat.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: droca-dimacs <file.cnf>\n";
    return 2;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const droca::CnfInstance cnf = droca::parse_dimacs(buf.str());
    const auto model = droca::solve_builtin(cnf);
    if (!model) {
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    }
    std::cout << "s SATISFIABLE\nv";
    for (std::size_t v = 1; v <= cnf.num_vars(); ++v) {
      std::cout << ' ' << ((*model)[v] ? "" : "-") << v;
      if (v % 20 == 0) std::cout << "\nv";
    }
    std::cout << " 0\n";
    return 10;
  } catch (const droca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
