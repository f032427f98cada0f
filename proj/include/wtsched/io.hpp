#pragma once

// Line-oriented text formats for instances, plans and schedules.
//
// Instance:
//   wtsched-instance 1
//   jobs N
//   machines M
//   WR k
//   s0 v
//   w  w_0 ... w_{N-1}
//   d  d_0 ... d_{N-1}
//   p  j  p_j0 ... p_j{M-1}          (one line per job)
//   s  i j  s_ij0 ... s_ij{M-1}      (one line per ordered pair i != j)
//   meta key value...
//
// Plan:
//   wtsched-plan 1
//   machine m  j_1 j_2 ...
//
// Schedule:
//   wtsched-schedule 1
//   objective v
//   optimal_alloc 0|1
//   job j machine setup_start setup_end completion
//
// '#' starts a comment line. Writers emit rows in index order so that
// identical values give identical bytes.

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wtsched/core.hpp"

namespace wtsched::io {

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  return {std::istream_iterator<std::string>(is), std::istream_iterator<std::string>()};
}

inline long long to_int(const std::string& tok, int line_no) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" + tok + "'");
  }
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::istringstream is{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = split(line);
    if (!toks.empty()) fn(toks, no);
  }
}

inline void expect_header(const std::vector<std::string>& toks, int no, std::string_view magic) {
  if (toks[0] != magic)
    throw ParseError("line " + std::to_string(no) + ": expected '" + std::string(magic) +
                     "' header, got '" + toks[0] + "'");
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// --- Instance ---------------------------------------------------------------

inline std::string write_instance(const Instance& inst) {
  std::ostringstream os;
  os << "wtsched-instance 1\n";
  os << "jobs " << inst.num_jobs << "\n";
  os << "machines " << inst.num_machines << "\n";
  os << "WR " << inst.resources << "\n";
  os << "s0 " << inst.initial_setup << "\n";
  os << "w";
  for (auto v : inst.weight) os << ' ' << v;
  os << "\nd";
  for (auto v : inst.due) os << ' ' << v;
  os << "\n";
  for (int j = 0; j < inst.num_jobs; ++j) {
    os << "p " << j;
    for (int m = 0; m < inst.num_machines; ++m) os << ' ' << inst.p(j, m);
    os << "\n";
  }
  for (int i = 0; i < inst.num_jobs; ++i)
    for (int j = 0; j < inst.num_jobs; ++j) {
      if (i == j) continue;
      os << "s " << i << ' ' << j;
      for (int m = 0; m < inst.num_machines; ++m) os << ' ' << inst.s(i, j, m);
      os << "\n";
    }
  for (const auto& [k, v] : inst.meta) os << "meta " << k << ' ' << v << "\n";
  return os.str();
}

inline Instance read_instance(std::string_view text) {
  Instance inst;
  bool header = false, sized = false;
  int jobs = -1, machines = -1;
  std::vector<char> have_p, have_s;
  bool have_w = false, have_d = false, have_wr = false;
  auto ensure_sized = [&](int no) {
    if (sized) return;
    if (jobs < 1 || machines < 1)
      throw ParseError("line " + std::to_string(no) + ": 'jobs' and 'machines' must come first");
    const int wr = inst.resources;
    const Time s0 = inst.initial_setup;
    auto meta = std::move(inst.meta);
    inst = Instance(jobs, machines);
    inst.resources = wr;
    inst.initial_setup = s0;
    inst.meta = std::move(meta);
    have_p.assign(jobs, 0);
    have_s.assign(static_cast<std::size_t>(jobs) * jobs, 0);
    sized = true;
  };
  detail::for_each_line(text, [&](const std::vector<std::string>& t, int no) {
    using detail::to_int;
    const auto err = [&](const std::string& msg) {
      throw ParseError("line " + std::to_string(no) + ": " + msg);
    };
    if (!header) {
      detail::expect_header(t, no, "wtsched-instance");
      header = true;
      return;
    }
    const std::string& key = t[0];
    if (key == "jobs" || key == "machines") {
      if (t.size() != 2) err("'" + key + "' takes one value");
      if (sized) err("'" + key + "' after matrix data");
      (key == "jobs" ? jobs : machines) = static_cast<int>(to_int(t[1], no));
    } else if (key == "WR") {
      if (t.size() != 2) err("'WR' takes one value");
      inst.resources = static_cast<int>(to_int(t[1], no));
      have_wr = true;
    } else if (key == "s0") {
      if (t.size() != 2) err("'s0' takes one value");
      inst.initial_setup = to_int(t[1], no);
    } else if (key == "w" || key == "d") {
      ensure_sized(no);
      if (static_cast<int>(t.size()) != jobs + 1) err("'" + key + "' needs one value per job");
      for (int j = 0; j < jobs; ++j) {
        const auto v = to_int(t[j + 1], no);
        if (key == "w")
          inst.weight[j] = v;
        else
          inst.due[j] = v;
      }
      (key == "w" ? have_w : have_d) = true;
    } else if (key == "p") {
      ensure_sized(no);
      if (static_cast<int>(t.size()) != machines + 2) err("'p' row needs job id + one value per machine");
      const auto j = to_int(t[1], no);
      if (j < 0 || j >= jobs) err("job id out of range");
      for (int m = 0; m < machines; ++m) inst.p(static_cast<int>(j), m) = to_int(t[m + 2], no);
      have_p[j] = 1;
    } else if (key == "s") {
      ensure_sized(no);
      if (static_cast<int>(t.size()) != machines + 3) err("'s' row needs pred, job + one value per machine");
      const auto i = to_int(t[1], no), j = to_int(t[2], no);
      if (i < 0 || i >= jobs || j < 0 || j >= jobs || i == j) err("invalid (pred, job) pair");
      for (int m = 0; m < machines; ++m)
        inst.s(static_cast<int>(i), static_cast<int>(j), m) = to_int(t[m + 3], no);
      have_s[i * jobs + j] = 1;
    } else if (key == "meta") {
      if (t.size() < 2) err("'meta' needs a key");
      std::string value;
      for (std::size_t k = 2; k < t.size(); ++k) value += (k > 2 ? " " : "") + t[k];
      inst.meta[t[1]] = value;
    } else {
      err("unknown field '" + key + "'");
    }
  });
  if (!header) throw ParseError("empty instance document");
  ensure_sized(0);
  if (!have_wr) throw ParseError("missing 'WR'");
  if (!have_w || !have_d) throw ParseError("missing 'w' or 'd'");
  for (int j = 0; j < jobs; ++j)
    if (!have_p[j]) throw ParseError("missing 'p' row for job " + std::to_string(j));
  for (int i = 0; i < jobs; ++i)
    for (int j = 0; j < jobs; ++j)
      if (i != j && !have_s[i * jobs + j])
        throw ParseError("missing 's' row for pair " + std::to_string(i) + " " + std::to_string(j));
  try {
    inst.check();
  } catch (const InvalidInstance& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

// --- Plan -------------------------------------------------------------------

inline std::string write_plan(const SequencePlan& plan) {
  std::ostringstream os;
  os << "wtsched-plan 1\n";
  for (int m = 0; m < plan.machines(); ++m) {
    os << "machine " << m;
    for (JobId j : plan.seq[m]) os << ' ' << j;
    os << "\n";
  }
  return os.str();
}

inline SequencePlan read_plan(std::string_view text) {
  SequencePlan plan;
  bool header = false;
  detail::for_each_line(text, [&](const std::vector<std::string>& t, int no) {
    if (!header) {
      detail::expect_header(t, no, "wtsched-plan");
      header = true;
      return;
    }
    if (t[0] != "machine" || t.size() < 2)
      throw ParseError("line " + std::to_string(no) + ": expected 'machine <id> jobs...'");
    const auto m = detail::to_int(t[1], no);
    if (m != plan.machines())
      throw ParseError("line " + std::to_string(no) + ": machines must be listed in order");
    std::vector<JobId> jobs;
    for (std::size_t k = 2; k < t.size(); ++k)
      jobs.push_back(static_cast<JobId>(detail::to_int(t[k], no)));
    plan.seq.push_back(std::move(jobs));
  });
  if (!header) throw ParseError("empty plan document");
  return plan;
}

// --- Schedule -----------------------------------------------------------------

/// `comments` are emitted as leading '#' lines (run metadata).
inline std::string write_schedule(const TimedSchedule& sched,
                                  const std::vector<std::string>& comments = {}) {
  std::ostringstream os;
  os << "wtsched-schedule 1\n";
  for (const auto& c : comments) os << "# " << c << "\n";
  os << "objective " << sched.objective << "\n";
  os << "optimal_alloc " << (sched.proven_optimal_allocation ? 1 : 0) << "\n";
  for (std::size_t j = 0; j < sched.jobs.size(); ++j) {
    const auto& jt = sched.jobs[j];
    os << "job " << j << ' ' << jt.machine << ' ' << jt.setup_start << ' ' << jt.setup_end << ' '
       << jt.completion << "\n";
  }
  return os.str();
}

inline TimedSchedule read_schedule(std::string_view text) {
  TimedSchedule sched;
  bool header = false, have_obj = false;
  std::vector<char> seen;
  detail::for_each_line(text, [&](const std::vector<std::string>& t, int no) {
    using detail::to_int;
    if (!header) {
      detail::expect_header(t, no, "wtsched-schedule");
      header = true;
      return;
    }
    if (t[0] == "objective" && t.size() == 2) {
      sched.objective = to_int(t[1], no);
      have_obj = true;
    } else if (t[0] == "optimal_alloc" && t.size() == 2) {
      sched.proven_optimal_allocation = to_int(t[1], no) != 0;
    } else if (t[0] == "job" && t.size() == 6) {
      const auto j = to_int(t[1], no);
      if (j < 0 || j > 1'000'000) throw ParseError("line " + std::to_string(no) + ": bad job id");
      if (static_cast<std::size_t>(j) >= sched.jobs.size()) {
        sched.jobs.resize(j + 1);
        seen.resize(j + 1, 0);
      }
      if (seen[j]) throw ParseError("line " + std::to_string(no) + ": duplicate job record");
      seen[j] = 1;
      sched.jobs[j] = {static_cast<MachineId>(to_int(t[2], no)), to_int(t[3], no),
                       to_int(t[4], no), to_int(t[5], no)};
    } else {
      throw ParseError("line " + std::to_string(no) + ": unrecognised record '" + t[0] + "'");
    }
  });
  if (!header) throw ParseError("empty schedule document");
  if (!have_obj) throw ParseError("missing 'objective'");
  for (std::size_t j = 0; j < seen.size(); ++j)
    if (!seen[j]) throw ParseError("missing record for job " + std::to_string(j));
  return sched;
}

}  // namespace wtsched::io
