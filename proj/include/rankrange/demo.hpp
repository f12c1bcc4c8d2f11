#pragma once

// Seeded battery over every dimension case. One record per instance, in a
// fixed order; the stream is a pure function of the seed unless timing is
// requested.

#include <rankrange/decomposition.hpp>
#include <rankrange/io.hpp>
#include <rankrange/region.hpp>
#include <rankrange/sampling.hpp>

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace rankrange {

struct DemoOptions {
  std::uint64_t seed = 42;
  int repetitions = 4;  // spectra per (N, k)
  bool timing = false;
  bool oracle = false;  // brute-force cross-check of the target (N <= 16)
};

struct DemoInstance {
  int n = 0;
  int k = 0;
  std::vector<double> phases;
  bool conjugate = false;
  std::uint64_t seed = 0;
};

struct DemoRecord {
  int index = 0;
  DemoInstance instance;
  Complex target;
  std::string dimension_case;
  std::string method;
  ResidualReport residuals;
  bool pass = false;
  bool skipped = false;
  std::string note;
  double wall_ms = -1.0;
};

struct DemoSummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
};

inline std::vector<std::pair<int, int>> default_demo_sizes() {
  std::vector<std::pair<int, int>> s;
  for (int k = 1; k <= 6; ++k) s.emplace_back(3 * k, k);
  for (int k = 2; k <= 6; ++k) s.emplace_back(3 * k - 1, k);
  for (int k = 5; k <= 8; ++k) s.emplace_back(3 * k - 2, k);
  s.emplace_back(4, 1);
  s.emplace_back(7, 1);
  return s;
}

/// Instances of the battery: seeded spectra for each size, alternating
/// diagonal and conjugated input, then a crafted spectrum whose rank-2
/// region has empty interior.
inline std::vector<DemoInstance> demo_instances(const DemoOptions& opt) {
  std::vector<DemoInstance> out;
  sampling::Rng master(opt.seed);
  for (const auto& [n, k] : default_demo_sizes()) {
    for (int r = 0; r < opt.repetitions; ++r) {
      DemoInstance d;
      d.n = n;
      d.k = k;
      d.seed = master();
      sampling::Rng rng(d.seed);
      d.phases = sampling::random_phases(rng, n);
      d.conjugate = (r % 2) == 1;
      out.push_back(std::move(d));
    }
  }
  out.push_back({5, 2, {0.0, 0.0, 0.0, 2.0, 4.0}, false, 0});
  return out;
}

inline DemoRecord run_demo_instance(const DemoInstance& inst, int index, const DemoOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  DemoRecord rec;
  rec.index = index;
  rec.instance = inst;

  EigenSystem es = ingest_spectrum(std::span<const double>(inst.phases));
  if (inst.conjugate) {
    sampling::Rng rng(inst.seed ^ 0x9e3779b97f4a7c15ULL);
    es = ingest_matrix(sampling::conjugated(sampling::random_unitary(rng, inst.n), inst.phases));
  }
  const auto region = build_region(es, inst.k);
  const auto target = interior_point(region);
  if (!target) {
    rec.skipped = true;
    rec.pass = true;
    rec.note = "empty region";
  } else {
    rec.target = *target;
    try {
      const auto p = construct_projector(es, inst.k, *target);
      rec.dimension_case = std::string(to_string(p.plan.dimension_case));
      rec.method = std::string(to_string(p.method));
      rec.residuals = p.residuals;
      rec.pass = p.residuals.pass;
      if (opt.oracle && inst.n <= kBruteForceMaxDim &&
          brute_force_contains(es, inst.k, *target) != Verdict::Inside) {
        rec.pass = false;
        rec.note = "oracle disagrees";
      }
    } catch (const Error& e) {
      rec.pass = false;
      rec.note = e.what();
    }
  }
  if (opt.timing)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
  return rec;
}

inline io::Json demo_record_to_json(const DemoRecord& r) {
  io::Json j{{"index", r.index},
             {"n", r.instance.n},
             {"k", r.instance.k},
             {"seed", r.instance.seed},
             {"conjugated", r.instance.conjugate},
             {"pass", r.pass}};
  if (r.skipped) {
    j["skipped"] = true;
  } else {
    j["lambda"] = io::complex_to_json(r.target);
    if (!r.dimension_case.empty()) {
      j["case"] = r.dimension_case;
      j["method"] = r.method;
      j["residuals"] = io::residuals_to_json(r.residuals);
    }
  }
  if (!r.note.empty()) j["note"] = r.note;
  if (r.wall_ms >= 0.0) j["wall_ms"] = r.wall_ms;
  return j;
}

/// Runs the battery, handing each record to `sink` in instance order.
inline DemoSummary run_demo(const DemoOptions& opt,
                            const std::function<void(const DemoRecord&)>& sink) {
  DemoSummary s;
  const auto instances = demo_instances(opt);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto rec = run_demo_instance(instances[i], static_cast<int>(i), opt);
    ++s.total;
    if (rec.skipped) ++s.skipped;
    else if (rec.pass) ++s.passed;
    else ++s.failed;
    if (sink) sink(rec);
  }
  return s;
}

}  // namespace rankrange
