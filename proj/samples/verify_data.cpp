// Certificates for the data definition files shipped in samples/data.

#include <cstdio>
#include <iostream>

#include "cpl/cpl.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : CPL_SAMPLE_DATA "/rnt_n4.dat";
  cpl::VerifyConfig cfg;
  cfg.data_file = path;
  cfg.resolution = 64;
  const auto out = cpl::verify(cfg);
  if (out.exit_code != 0) {
    std::cerr << out.message << "\n";
    return out.exit_code;
  }
  for (const auto& c : out.document["certificates"])
    std::printf("%-15s slack=%-24s %s\n", c["name"].get<std::string>().c_str(), c["slack"].dump().c_str(),
                c["verdict"].get<std::string>().c_str());
  std::printf("mass total = %.12g\n", out.document["mass"]["total"].get<double>());
}
