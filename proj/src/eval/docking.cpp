//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/eval/docking.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <unistd.h>
#include <sys/wait.h>

#include <atomic>
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "synthphore/chem/element.hpp"
#include "synthphore/chem/pharmacophore.hpp"
#include "synthphore/util/error.hpp"

extern char** environ;

namespace synthphore::eval {

namespace fs = std::filesystem;

std::optional<fs::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  const auto runnable = [](const fs::path& p) {
    std::error_code ec;
    const auto st = fs::status(p, ec);
    return !ec && fs::is_regular_file(st) && (st.permissions() & fs::perms::others_exec) != fs::perms::none;
  };
  if (name.find('/') != std::string::npos) {
    return runnable(name) ? std::optional<fs::path>(name) : std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    const fs::path candidate = fs::path(dir) / name;
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::vector<double> parse_affinity_table(const std::string& output) {
  std::istringstream in(output);
  std::string line;
  bool in_table = false;
  std::vector<double> scores;
  static const std::regex row(R"(^\s*(\d+)\s+(-?\d+(?:\.\d+)?)\s+(\d+(?:\.\d+)?)\s+(\d+(?:\.\d+)?)\s*$)");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_table) {
      if (line.rfind("-----+", 0) == 0) in_table = true;
      continue;
    }
    std::smatch m;
    if (!std::regex_match(line, m, row)) break;
    scores.push_back(std::stod(m[2].str()));
  }
  if (scores.empty()) throw ToolFailure("no affinity table in docking output:\n" + output);
  return scores;
}

namespace {

std::string ad_type(const chem::MolGraph& g, int i, const std::vector<bool>& acceptor) {
  const auto& a = g.atom(i);
  switch (a.element) {
    case 6: return a.aromatic ? "A" : "C";
    case 7: return acceptor[static_cast<std::size_t>(i)] ? "NA" : "N";
    case 8: return "OA";
    case 16: return "SA";
    default: {
      std::string s(chem::element_info(a.element)->symbol);
      return s;
    }
  }
}

std::array<double, 3> centroid(const chem::Conformer& conf) {
  std::array<double, 3> c{0, 0, 0};
  for (const auto& p : conf.coords) {
    for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)];
  }
  for (auto& v : c) v /= static_cast<double>(std::max<std::size_t>(conf.coords.size(), 1));
  return c;
}

std::string run_capture(const std::vector<std::string>& argv, const fs::path& log, int& status) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, argv[0].c_str(), &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw ToolFailure("could not start " + argv[0] + ": " + std::strerror(rc));
  waitpid(pid, &status, 0);
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_pdbqt(const chem::Conformer& conf) {
  const auto& g = conf.parent.graph();
  const auto sites = chem::find_feature_sites(g);
  std::vector<bool> acceptor(g.atom_count(), false);
  for (const auto& site : sites.sites[static_cast<int>(chem::FeatureClass::HBA)]) {
    for (int a : site) acceptor[static_cast<std::size_t>(a)] = true;
  }
  std::string out = "REMARK  Name = " + conf.parent.smiles + "\nROOT\n";
  char line[128];
  for (std::size_t i = 0; i < g.atom_count(); ++i) {
    const int idx = static_cast<int>(i);
    const std::string type = ad_type(g, idx, acceptor);
    const std::string name = std::string(chem::element_info(g.atom(idx).element)->symbol) + std::to_string(i + 1);
    const auto& p = conf.coords[i];
    std::snprintf(line, sizeof line, "%-6s%5zu %-4.4s %3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f    %6.3f %-2s\n",
                  "ATOM", i + 1, name.c_str(), "LIG", 'A', 1, p[0], p[1], p[2], 1.0, 0.0, 0.0, type.c_str());
    out += line;
  }
  out += "ENDROOT\nTORSDOF 0\n";
  return out;
}

std::vector<std::string> docking_command(const DockingJob& job, const fs::path& exe, const fs::path& ligand,
                                         const fs::path& out, const std::array<double, 3>& center) {
  const auto num = [](double v) {
    std::ostringstream s;
    s.precision(4);
    s << std::fixed << v;
    return s.str();
  };
  return {exe.string(),  "-r",           job.receptor.string(), "-l",
          ligand.string(), "--center_x", num(center[0]),        "--center_y",
          num(center[1]), "--center_z",  num(center[2]),        "--size_x",
          num(job.box_edge), "--size_y", num(job.box_edge),     "--size_z",
          num(job.box_edge), "--num_modes", std::to_string(job.num_modes), "--seed",
          std::to_string(job.seed), "--cpu", "1",               "-o",
          out.string()};
}

std::vector<DockingResult> dock(const DockingJob& job) {
  if (job.ligands.empty()) return {};
  if (job.num_modes < 1 || job.num_modes > 10) throw InvalidArgument("num_modes must be in [1, 10]");
  const auto exe = find_executable(job.executable);
  if (!exe) throw ExternalToolMissing("docking executable '" + job.executable + "' not found on PATH; docking disabled");
  fs::path dir = job.work_dir;
  if (dir.empty()) {
    dir = fs::temp_directory_path() / ("synthphore-dock-" + std::to_string(::getpid()));
  }
  fs::create_directories(dir);

  std::vector<DockingResult> results(job.ligands.size());
  std::vector<std::string> errors(job.ligands.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < job.ligands.size(); i = next++) {
      try {
        const auto conf = chem::gen_conformer(job.ligands[i], job.seed);
        const fs::path ligand = dir / ("ligand_" + std::to_string(i) + ".pdbqt");
        std::ofstream(ligand) << to_pdbqt(conf);
        const auto center = job.center ? *job.center : centroid(conf);
        const auto argv = docking_command(job, *exe, ligand, dir / ("pose_" + std::to_string(i) + ".pdbqt"), center);
        int status = 0;
        const std::string out = run_capture(argv, dir / ("log_" + std::to_string(i) + ".txt"), status);
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
          throw ToolFailure(job.executable + " failed on " + job.ligands[i].smiles + ":\n" + out);
        }
        auto scores = parse_affinity_table(out);
        results[i] = {job.ligands[i].smiles, *std::min_element(scores.begin(), scores.end()), std::move(scores)};
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::max(1, std::min<int>(job.workers, static_cast<int>(job.ligands.size())));
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw ToolFailure(e);
  }
  return results;
}

}  // namespace synthphore::eval
