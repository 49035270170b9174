// End-to-end checks of the netprop binary: exit codes, output formats, and
// the worked 2-node pipeline. Usage: test_cli <netprop-binary> <workdir>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: test_cli <netprop-binary> <workdir>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const fs::path work = argv[2];
  fs::remove_all(work);
  fs::create_directories(work);

  const fs::path pair_net = work / "pair.tsv";
  write(pair_net, "a\tb\t1.0\n");
  const fs::path path_net = work / "path.tsv";
  write(path_net, "a\tb\t1.0\nb\tc\t1.0\n");

  // --- usage errors exit with 2 -------------------------------------------
  check(run(bin + " evaluate " + pair_net.string() +
            " --annotations missing.tsv --folds 1 2>/dev/null") == 2,
        "--folds 1 is a usage error");
  check(run(bin + " predict " + pair_net.string() +
            " --labels x.tsv --method foo 2>/dev/null") == 2,
        "unknown --method is a usage error");
  check(run(bin + " 2>/dev/null") == 2, "missing subcommand is a usage error");

  // --- data errors exit with 1 and name the path --------------------------
  {
    const fs::path err = work / "stderr.txt";
    const int code =
        run(bin + " integrate " + (work / "nope.tsv").string() + " 2>" + err.string());
    check(code == 1, "missing network file exits 1");
    check(contains(slurp(err), "nope.tsv"), "error message names the missing path");
  }

  // --- integrate stats -----------------------------------------------------
  {
    const fs::path star_net = work / "star.tsv";
    write(star_net, "a\tc\t1.0\nb\tc\t1.0\n");  // same nodes as path.tsv, no isolation
    const fs::path out = work / "integrate_rw.txt";
    check(run(bin + " integrate " + star_net.string() + " " + path_net.string() +
              " --method rw --output " + out.string()) == 0,
          "integrate rw runs");
    const std::string text = slurp(out);
    check(contains(text, "n = 3"), "integrate reports n");
    check(contains(text, "m = 2"), "integrate reports m");
    double lo = 0.0, hi = 0.0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::sscanf(line.c_str(), "row_sum_min = %lf", &lo);
      std::sscanf(line.c_str(), "row_sum_max = %lf", &hi);
    }
    check(lo >= 1.0 - 1e-12 && hi <= 1.0 + 1e-12,
          "rw row sums lie in [1-1e-12, 1+1e-12] without isolated nodes");
  }
  {
    const fs::path out = work / "integrate_sym.txt";
    check(run(bin + " integrate " + path_net.string() + " --method sym --output " +
              out.string()) == 0,
          "integrate sym runs");
    check(contains(slurp(out), "symmetric = true"), "sym operator reports symmetric");
  }

  // --- predict: the 2-node worked example ---------------------------------
  {
    const fs::path labels = work / "labels.tsv";
    write(labels, "node\ttrain\tc1\na\t1\t+1\nb\t0\t0\n");
    for (const std::string method : {"rw", "sym"}) {
      const fs::path out = work / ("predict_" + method + ".tsv");
      check(run(bin + " predict " + pair_net.string() + " --labels " + labels.string() +
                " --method " + method + " --alpha 0.5 --output " + out.string()) == 0,
            "predict " + method + " runs");
      const std::string text = slurp(out);
      check(contains(text, "a\tc1\t0.6667\t+1"), method + " scores node a 0.6667");
      check(contains(text, "b\tc1\t0.3333\t+1"), method + " scores node b 0.3333");
    }
    const fs::path out = work / "predict_unnorm.tsv";
    check(run(bin + " predict " + pair_net.string() + " --labels " + labels.string() +
              " --method unnorm --gamma 1 --output " + out.string()) == 0,
          "predict unnorm runs");
    check(contains(slurp(out), "a\tc1\t0.6667\t+1"), "unnorm scores node a 0.6667");
  }

  // --- predict: all-labeled clamped run reproduces its inputs -------------
  {
    const fs::path labels = work / "clamped.tsv";
    write(labels, "node\ttrain\tc1\na\t1\t+1\nb\t1\t-1\nc\t1\t+1\n");
    const fs::path out = work / "predict_clamped.tsv";
    check(run(bin + " predict " + path_net.string() + " --labels " + labels.string() +
              " --method rw-clamped --output " + out.string()) == 0,
          "predict rw-clamped runs");
    const std::string text = slurp(out);
    check(contains(text, "a\tc1\t1.0000\t+1"), "clamped keeps node a at +1");
    check(contains(text, "b\tc1\t-1.0000\t-1"), "clamped keeps node b at -1");
    check(contains(text, "c\tc1\t1.0000\t+1"), "clamped keeps node c at +1");
  }

  // --- evaluate on a generated two-clique dataset -------------------------
  {
    const fs::path data = work / "cliques";
    check(run(bin + " gen-synthetic --outdir " + data.string() +
              " --n 40 --clusters 2 --networks 2 --retention 0.9 --within-density 1.0"
              " --between-density 0.0 --seed 7 > /dev/null") == 0,
          "gen-synthetic runs");
    const fs::path out = work / "evaluate_all.tsv";
    check(run(bin + " evaluate " + (data / "network_1.tsv").string() + " " +
              (data / "network_2.tsv").string() + " --node-list " +
              (data / "nodes.txt").string() + " --annotations " +
              (data / "annotations.tsv").string() + " --all-methods --folds 3 --seed 42" +
              " --output " + out.string()) == 0,
          "evaluate --all-methods runs");
    const std::string text = slurp(out);
    check(contains(text, "class\tnormalized\trandom_walk\tunnormalized"),
          "comparison table has the three method columns");
    // parse the two class rows and require every Q >= 90
    std::istringstream lines(text);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("class\t", 0) == 0) continue;
      std::istringstream cells(line);
      std::string cls;
      double q1, q2, q3;
      cells >> cls >> q1 >> q2 >> q3;
      check(q1 >= 90.0 && q2 >= 90.0 && q3 >= 90.0, "clique Q >= 90 in " + line);
      ++rows;
    }
    check(rows == 2, "comparison table has one row per class");
  }

  // --- config file defaults, flags win ------------------------------------
  {
    const fs::path config = work / "run.toml";
    write(config, "[predict]\nalpha = 0.5\nmethod = \"rw\"\n");
    const fs::path labels = work / "labels.tsv";
    const fs::path out = work / "predict_config.tsv";
    check(run(bin + " --config " + config.string() + " predict " + pair_net.string() +
              " --labels " + labels.string() + " --output " + out.string()) == 0,
          "config file supplies defaults");
    check(contains(slurp(out), "a\tc1\t0.6667\t+1"), "config alpha=0.5 applied");
  }

  if (failures == 0) {
    std::cout << "test_cli: all checks passed\n";
    return 0;
  }
  std::cerr << "test_cli: " << failures << " check(s) failed\n";
  return 1;
}
