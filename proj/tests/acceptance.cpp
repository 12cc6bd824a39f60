// Runs the twelve acceptance criteria and prints one line per criterion.
// Usage: acceptance [report.json]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "cpnlab/report.hpp"

using namespace cpnlab;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> experiments;
  // Optional record filter, on the part after '/'.
  std::function<bool(const std::string&)> keep;
};

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Croke identity", {"croke"}, {}},
      {2, "Bound saturation, complex", {"bounds-identity"}, [](const std::string& c) { return !starts_with(c, "rpn "); }},
      {3, "Bound saturation, real", {"bounds-identity"}, [](const std::string& c) { return starts_with(c, "rpn "); }},
      {4, "Line-average formula", {"line-formula"}, {}},
      {5, "RP^2 family average", {"rp2-family"}, {}},
      {6, "Squeeze construction", {"squeeze"}, {}},
      {7, "Holomorphic corpus", {"holomorphic-corpus"}, {}},
      {8, "Variational identities", {"jacobi", "trace-II"}, {}},
      {9, "theta / capped theta constructions", {"theta", "capped-theta"}, {}},
      {10, "Pu systolic inequality", {"pu"}, {}},
      {11, "Energy flow", {"flow"}, {}},
      {12, "Property suites", {"properties"}, {}},
  };

  std::map<std::string, std::vector<ExperimentReport>> cache;
  std::map<std::string, double> seconds;
  std::vector<ExperimentReport> all;
  bool ok = true;
  for (const auto& c : criteria) {
    std::vector<ExperimentReport> mine;
    double wall = 0.0;
    for (const auto& e : c.experiments) {
      if (!cache.count(e)) {
        const auto t0 = std::chrono::steady_clock::now();
        cache[e] = run_experiment(e);
        seconds[e] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all.insert(all.end(), cache[e].begin(), cache[e].end());
      }
      wall += seconds[e];
      for (const auto& r : cache[e])
        if (!c.keep || c.keep(r.name.substr(r.name.find('/') + 1))) mine.push_back(r);
    }
    const bool pass = !mine.empty() && all_pass(mine);
    ok = ok && pass;
    std::printf("criterion %2d  %-4s  %-36s %3zu checks  %7.1fs\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                mine.size(), wall);
    for (const auto& r : mine)
      if (!r.pass)
        std::printf("      failed %s: estimate %.10g reference %.10g tolerance %g (%s) %s\n", r.name.c_str(),
                    r.estimate, r.reference, r.tolerance, to_string(r.kind).c_str(), r.note.c_str());
    std::fflush(stdout);
  }
  if (argc > 1) {
    std::ofstream out(argv[1]);
    write_reports_json(all, out);
  }
  std::printf("%s\n", ok ? "all criteria pass" : "some criteria FAILED");
  return ok ? 0 : 1;
}
