#include "mdgs/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mdgs/covering.hpp"
#include "mdgs/solver.hpp"
#include "mdgs/statistics.hpp"

namespace mdgs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

nlohmann::ordered_json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"variance", s.variance}, {"std_error", s.std_error},
          {"count", s.count}};
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::int32_t TorusWindow::window_sigma(SigmaIndex master_sigma) const {
  const Lattice& m = *master;
  const Lattice& w = *lattice;
  if (m.is_vertex(master_sigma)) {
    for (std::int32_t v = 0; v < w.vertex_count(); ++v) {
      if (vertex_to_master[v] == master_sigma) return v;
    }
  } else {
    const std::int32_t me = m.edge_of(master_sigma);
    for (std::int32_t e = 0; e < w.edge_count(); ++e) {
      if (edge_to_master[e] == me) return w.edge_sigma(e);
    }
  }
  throw ExperimentError("site does not lie in the window");
}

TorusWindow make_window(const std::shared_ptr<const Lattice>& master, int r) {
  if (!master->is_torus()) throw ExperimentError("windows require a torus master");
  const int d = master->dimension();
  const int n = master->side();
  if (r < 3 || r > n) throw ExperimentError("window size must lie in [3, side]");
  TorusWindow win;
  win.master = master;
  win.lattice = Lattice::torus(d, r);
  const int offset = n / 2 - r / 2;  // centered; identity when r == n
  win.vertex_to_master.resize(win.lattice->vertex_count());
  win.edge_to_master.resize(win.lattice->edge_count());
  std::vector<int> coords(d);
  for (std::int32_t v = 0; v < win.lattice->vertex_count(); ++v) {
    const auto c = win.lattice->vertex_coords(v);
    for (int i = 0; i < d; ++i) coords[i] = c[i] + offset;
    win.vertex_to_master[v] = master->vertex_at(coords);
  }
  for (std::int32_t v = 0; v < win.lattice->vertex_count(); ++v) {
    for (int dir = 0; dir < d; ++dir) {
      win.edge_to_master[win.lattice->torus_edge(v, dir)] =
          master->torus_edge(win.vertex_to_master[v], dir);
    }
  }
  return win;
}

WeightAssignment window_weights(const TorusWindow& win, const WeightAssignment& master_j) {
  const Lattice& w = *win.lattice;
  std::vector<double> values(w.sigma_size());
  for (std::int32_t v = 0; v < w.vertex_count(); ++v) {
    values[v] = master_j.vertex_weight(win.vertex_to_master[v]);
  }
  for (std::int32_t e = 0; e < w.edge_count(); ++e) {
    values[w.edge_sigma(e)] = master_j.edge_weight(win.edge_to_master[e]);
  }
  Provenance prov = master_j.provenance();
  prov.transforms.push_back("window(" + std::to_string(w.side()) + ")");
  return WeightAssignment(win.lattice, std::move(values), std::move(prov));
}

// ---------------------------------------------------------------------------
// stabilization

ExperimentReport stabilization_experiment(const StabilizationConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.sizes.size() < 2) throw ExperimentError("stabilization needs at least two sizes");
  for (std::size_t i = 0; i + 1 < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] >= cfg.sizes[i + 1]) throw ExperimentError("sizes must be ascending");
  }
  for (int s : cfg.sizes) {
    if (s < 2 * cfg.box_radius + 2) throw ExperimentError("every size must be >= 2K + 2");
  }
  const auto master = Lattice::torus(cfg.dimension, cfg.sizes.back());
  std::vector<TorusWindow> windows;
  for (int s : cfg.sizes) windows.push_back(make_window(master, s));

  // The comparison set: the box B_K around the center, vertices plus the
  // edges staying inside it, as master Sigma indices.
  const int d = cfg.dimension;
  const int k_rad = cfg.box_radius;
  std::vector<SigmaIndex> box;
  {
    const int n = master->side();
    std::vector<int> delta(d, -k_rad);
    std::vector<int> coords(d);
    while (true) {
      for (int i = 0; i < d; ++i) coords[i] = n / 2 + delta[i];
      const auto v = master->vertex_at(coords);
      box.push_back(master->vertex_sigma(v));
      for (int dir = 0; dir < d; ++dir) {
        if (delta[dir] < k_rad) box.push_back(master->edge_sigma(master->torus_edge(v, dir)));
      }
      int axis = 0;
      while (axis < d && ++delta[axis] > k_rad) delta[axis++] = -k_rad;
      if (axis == d) break;
    }
    std::sort(box.begin(), box.end());
  }

  struct PairRecord {
    double fraction = 0.0;
    std::string disagreements;
  };
  const int npairs = static_cast<int>(cfg.sizes.size()) - 1;
  std::vector<std::vector<PairRecord>> records(cfg.samples, std::vector<PairRecord>(npairs));

  // Window Sigma index of every box element, per window size.
  std::vector<std::vector<std::int32_t>> box_sigma(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    box_sigma[w].reserve(box.size());
    for (SigmaIndex x : box) box_sigma[w].push_back(windows[w].window_sigma(x));
  }

  parallel_for(cfg.samples, cfg.jobs, [&](int s) {
    const auto master_j = sample(master, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    std::vector<Covering> solved;
    solved.reserve(windows.size());
    for (const auto& win : windows) {
      solved.push_back(ground_state(window_weights(win, master_j)).covering_ref());
    }
    for (int p = 0; p < npairs; ++p) {
      int disagree = 0;
      std::string list;
      for (std::size_t i = 0; i < box.size(); ++i) {
        const bool a = solved[p].occupied(box_sigma[p][i]);
        const bool b = solved[p + 1].occupied(box_sigma[p + 1][i]);
        if (a != b) {
          ++disagree;
          if (!list.empty()) list += ';';
          list += std::to_string(box[i]);
        }
      }
      records[s][p].fraction = static_cast<double>(disagree) / box.size();
      records[s][p].disagreements = std::move(list);
    }
  });

  ExperimentReport report;
  report.name = "stabilize";
  report.lattice_spec = master->spec_string();
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension},
                   {"sizes", cfg.sizes},
                   {"box_radius", cfg.box_radius},
                   {"samples", cfg.samples},
                   {"distribution", cfg.dist.name()},
                   {"seed", cfg.seed}};
  report.csv_header = {"sample", "size_small", "size_big", "disagree_fraction", "disagreements"};
  for (int s = 0; s < cfg.samples; ++s) {
    for (int p = 0; p < npairs; ++p) {
      report.csv_rows.push_back(join_csv({std::to_string(s), std::to_string(cfg.sizes[p]),
                                          std::to_string(cfg.sizes[p + 1]),
                                          format_double(records[s][p].fraction),
                                          "\"" + records[s][p].disagreements + "\""}));
    }
  }
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  std::vector<Summary> stats(npairs);
  for (int p = 0; p < npairs; ++p) {
    std::vector<double> fr(cfg.samples);
    for (int s = 0; s < cfg.samples; ++s) fr[s] = records[s][p].fraction;
    stats[p] = summarize(fr);
    pairs.push_back({{"size_small", cfg.sizes[p]},
                     {"size_big", cfg.sizes[p + 1]},
                     {"disagree", summary_json(stats[p])}});
  }
  nlohmann::ordered_json decreases = nlohmann::ordered_json::array();
  for (int p = 0; p + 1 < npairs; ++p) {
    const double drop = stats[p].mean - stats[p + 1].mean;
    const double pooled =
        std::sqrt(stats[p].std_error * stats[p].std_error +
                  stats[p + 1].std_error * stats[p + 1].std_error);
    decreases.push_back({{"from_pair", p}, {"drop", drop}, {"pooled_se", pooled}});
  }
  report.summary = {{"box_elements", box.size()}, {"pairs", pairs}, {"decreases", decreases}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// chaos

ExperimentReport chaos_experiment(const ChaosConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.p_grid.empty()) throw ExperimentError("chaos needs a p grid");
  for (double p : cfg.p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw ExperimentError("p values must lie in [0,1]");
  }
  const auto lattice = Lattice::torus(cfg.dimension, cfg.side);
  const std::int32_t origin = 0;
  const int np = static_cast<int>(cfg.p_grid.size());

  struct Rec {
    std::int8_t origin_delta = 0;
    std::int8_t structure_ok = 1;
    std::int32_t components = 0;
    std::int32_t largest = 0;
    std::int32_t total = 0;
    double energy_p = 0.0;
    std::map<std::int32_t, std::int32_t> hist;
  };
  std::vector<std::vector<Rec>> records(cfg.samples, std::vector<Rec>(np));
  std::vector<double> base_energy(cfg.samples);

  parallel_for(cfg.samples, cfg.jobs, [&](int s) {
    const auto j = sample(lattice, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    const auto jp = sample_prime(lattice, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    const auto m = ground_state(j).covering_ref();
    base_energy[s] = energy(m, j);
    for (int pi = 0; pi < np; ++pi) {
      const auto resampled =
          resample_p(j, jp, cfg.p_grid[pi], cfg.seed, static_cast<std::uint32_t>(s));
      const auto mp = ground_state(resampled).covering_ref();
      Rec& r = records[s][pi];
      r.energy_p = energy(mp, resampled);
      try {
        const auto decomp = sym_diff_decompose(m, mp);
        r.components = static_cast<std::int32_t>(decomp.components.size());
        for (const auto& c : decomp.components) {
          const auto sz = static_cast<std::int32_t>(c.size());
          r.total += sz;
          r.largest = std::max(r.largest, sz);
          ++r.hist[sz];
        }
      } catch (const CoveringError&) {
        r.structure_ok = 0;
      }
      r.origin_delta = (m.occupied(origin) != mp.occupied(origin)) ? 1 : 0;
    }
  });

  ExperimentReport report;
  report.name = "chaos";
  report.lattice_spec = lattice->spec_string();
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension}, {"side", cfg.side},   {"p_grid", cfg.p_grid},
                   {"samples", cfg.samples},     {"distribution", cfg.dist.name()},
                   {"seed", cfg.seed}};
  report.csv_header = {"sample",  "p",     "origin_in_delta", "components",
                       "largest", "total", "energy_p",        "structure_ok"};
  for (int s = 0; s < cfg.samples; ++s) {
    for (int pi = 0; pi < np; ++pi) {
      const Rec& r = records[s][pi];
      report.csv_rows.push_back(join_csv(
          {std::to_string(s), format_double(cfg.p_grid[pi]), std::to_string(r.origin_delta),
           std::to_string(r.components), std::to_string(r.largest), std::to_string(r.total),
           format_double(r.energy_p), std::to_string(r.structure_ok)}));
    }
  }

  const double volume = std::pow(cfg.side, cfg.dimension);
  nlohmann::ordered_json per_p = nlohmann::ordered_json::array();
  long violations = 0;
  for (int pi = 0; pi < np; ++pi) {
    std::vector<double> hits(cfg.samples), largest(cfg.samples), energies(cfg.samples);
    std::map<std::int32_t, std::int64_t> hist;
    for (int s = 0; s < cfg.samples; ++s) {
      const Rec& r = records[s][pi];
      hits[s] = r.origin_delta;
      largest[s] = r.largest / volume;
      energies[s] = r.energy_p;
      violations += r.structure_ok ? 0 : 1;
      for (const auto& [sz, c] : r.hist) hist[sz] += c;
    }
    const auto hit_stats = summarize(hits);
    nlohmann::ordered_json hist_json = nlohmann::ordered_json::object();
    for (const auto& [sz, c] : hist) hist_json[std::to_string(sz)] = c;
    const double ks = ks_two_sample_statistic(energies, base_energy);
    per_p.push_back({{"p", cfg.p_grid[pi]},
                     {"origin_in_delta", summary_json(hit_stats)},
                     {"largest_fraction_mean", summarize(largest).mean},
                     {"component_size_histogram", hist_json},
                     {"energy_marginal_ks", ks},
                     {"energy_marginal_ks_p",
                      ks_two_sample_p_value(ks, energies.size(), base_energy.size())}});
  }
  report.summary = {{"per_p", per_p}, {"structure_violations", violations}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// clt

ExperimentReport clt_experiment(const CltConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.samples < 50) throw ExperimentError("clt needs at least 50 samples for the KS test");
  if (cfg.sides.empty()) throw ExperimentError("clt needs at least one torus side");

  ExperimentReport report;
  report.name = cfg.synthetic ? "clt-null" : "clt";
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension},
                   {"sides", cfg.sides},
                   {"samples", cfg.samples},
                   {"distribution", cfg.dist.name()},
                   {"seed", cfg.seed},
                   {"synthetic", cfg.synthetic},
                   {"bootstrap_resamples", cfg.bootstrap_resamples}};
  report.csv_header = {"side", "sample", "H", "z"};

  nlohmann::ordered_json per_n = nlohmann::ordered_json::array();
  for (int side : cfg.sides) {
    const std::uint64_t seed_n = mix_seed(cfg.seed, static_cast<std::uint64_t>(side));
    std::vector<double> h(cfg.samples);
    if (cfg.synthetic) {
      for (int s = 0; s < cfg.samples; ++s) {
        h[s] = RngStream(seed_n, Stream::kSynthetic, static_cast<std::uint32_t>(s)).normal(0);
      }
    } else {
      const auto lattice = Lattice::torus(cfg.dimension, side);
      parallel_for(cfg.samples, cfg.jobs, [&](int s) {
        const auto j = sample(lattice, cfg.dist, seed_n, static_cast<std::uint32_t>(s));
        h[s] = ground_state(j).energy;
      });
    }
    const auto stats = summarize(h);
    const double sd = std::sqrt(stats.variance);
    std::vector<double> z(cfg.samples);
    for (int s = 0; s < cfg.samples; ++s) z[s] = (h[s] - stats.mean) / sd;
    const double d = ks_statistic_normal(z);
    const double p = ks_p_value(d, z.size());
    const double volume = std::pow(side, cfg.dimension);
    const auto ci = bootstrap_variance_ci(h, cfg.bootstrap_resamples, mix_seed(seed_n, 0xB007));
    per_n.push_back({{"side", side},
                     {"mean", stats.mean},
                     {"variance", stats.variance},
                     {"variance_per_site", stats.variance / volume},
                     {"variance_ci_low", ci.first},
                     {"variance_ci_high", ci.second},
                     {"variance_per_site_ci_low", ci.first / volume},
                     {"variance_per_site_ci_high", ci.second / volume},
                     {"ks_statistic", d},
                     {"ks_p_value", p}});
    for (int s = 0; s < cfg.samples; ++s) {
      report.csv_rows.push_back(join_csv(
          {std::to_string(side), std::to_string(s), format_double(h[s]), format_double(z[s])}));
    }
  }
  report.lattice_spec =
      "t" + std::to_string(cfg.dimension) + "x" + std::to_string(cfg.sides.back());
  report.summary = {{"per_side", per_n}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// correlation decay

ExperimentReport correlation_decay_experiment(const DecayConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.r_list.empty()) throw ExperimentError("decay needs an R list");
  const auto lattice = Lattice::torus(cfg.dimension, cfg.side);
  const int d = cfg.dimension;
  const int n = cfg.side;
  const int max_axis = n / 2;

  // x2(R): displaced from the origin by total torus distance 2R.
  auto displaced = [&](int twice_r, int shift) -> std::int32_t {
    std::vector<int> coords(d, 0);
    coords[0] += shift;
    int remaining = twice_r;
    for (int i = 0; i < d && remaining > 0; ++i) {
      const int step = std::min(max_axis, remaining);
      coords[i] += step;
      remaining -= step;
    }
    if (remaining > 0) throw ExperimentError("no site pair at torus distance 2R exists");
    return lattice->vertex_at(coords);
  };
  const int nr = static_cast<int>(cfg.r_list.size());
  std::vector<std::int32_t> x2(nr), x2s(nr);
  const std::int32_t x1 = 0;
  const std::int32_t x1s = displaced(0, 1);
  for (int ri = 0; ri < nr; ++ri) {
    x2[ri] = displaced(2 * cfg.r_list[ri], 0);
    x2s[ri] = displaced(2 * cfg.r_list[ri], 1);
    if (lattice->graph_distance(x1, x2[ri]) < 2 * cfg.r_list[ri]) {
      throw ExperimentError("internal: displaced pair closer than 2R");
    }
  }

  struct Rec {
    std::int8_t a = 0, a_shift = 0;
    std::vector<std::int8_t> b, b_shift;
  };
  std::vector<Rec> records(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](int s) {
    const auto j = sample(lattice, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    const auto m = ground_state(j).covering_ref();
    Rec& r = records[s];
    r.a = m.occupied(x1);
    r.a_shift = m.occupied(x1s);
    r.b.resize(nr);
    r.b_shift.resize(nr);
    for (int ri = 0; ri < nr; ++ri) {
      r.b[ri] = m.occupied(x2[ri]);
      r.b_shift[ri] = m.occupied(x2s[ri]);
    }
  });

  auto covariance = [&](auto geta, auto getb) {
    double ma = 0.0, mb = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      ma += geta(s);
      mb += getb(s);
    }
    ma /= cfg.samples;
    mb /= cfg.samples;
    std::vector<double> prod(cfg.samples);
    for (int s = 0; s < cfg.samples; ++s) prod[s] = (geta(s) - ma) * (getb(s) - mb);
    const auto st = summarize(prod);
    const double cov = st.mean * cfg.samples / (cfg.samples - 1);
    return std::pair{cov, st.std_error};
  };

  ExperimentReport report;
  report.name = "decay";
  report.lattice_spec = lattice->spec_string();
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension}, {"side", cfg.side},
                   {"r_list", cfg.r_list},       {"samples", cfg.samples},
                   {"distribution", cfg.dist.name()}, {"seed", cfg.seed}};
  report.csv_header = {"sample", "R", "x1", "x2", "x1_shift", "x2_shift"};
  for (int s = 0; s < cfg.samples; ++s) {
    for (int ri = 0; ri < nr; ++ri) {
      report.csv_rows.push_back(join_csv({std::to_string(s), std::to_string(cfg.r_list[ri]),
                                          std::to_string(records[s].a),
                                          std::to_string(records[s].b[ri]),
                                          std::to_string(records[s].a_shift),
                                          std::to_string(records[s].b_shift[ri])}));
    }
  }
  std::vector<double> origin(cfg.samples);
  for (int s = 0; s < cfg.samples; ++s) origin[s] = records[s].a;
  nlohmann::ordered_json per_r = nlohmann::ordered_json::array();
  for (int ri = 0; ri < nr; ++ri) {
    const auto [cov, se] = covariance([&](int s) { return double(records[s].a); },
                                      [&](int s) { return double(records[s].b[ri]); });
    const auto [cov_s, se_s] = covariance([&](int s) { return double(records[s].a_shift); },
                                          [&](int s) { return double(records[s].b_shift[ri]); });
    per_r.push_back({{"R", cfg.r_list[ri]},
                     {"distance", lattice->graph_distance(x1, x2[ri])},
                     {"cov", cov},
                     {"cov_se", se},
                     {"cov_shifted", cov_s},
                     {"cov_shifted_se", se_s}});
  }
  report.summary = {{"origin_occupation_variance", summarize(origin).variance},
                    {"per_R", per_r}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// derivative decomposition

ExperimentReport derivative_decomposition_check(const DerivativeConfig& cfg) {
  const auto t0 = Clock::now();
  const auto lattice = Lattice::torus(cfg.dimension, cfg.side);
  if (cfg.sites_per_sample < 1) throw ExperimentError("derivative needs at least one site");
  if (cfg.sites_per_sample > lattice->sigma_size()) {
    throw ExperimentError("more sites than |Sigma|");
  }

  struct SiteRec {
    SigmaIndex site = 0;
    double jx = 0, jpx = 0, k = 0, dh = 0, rhs = 0, err = 0, e1 = 0, e2 = 0;
    int kase = 0;  // 0: both below K, 1: J<K<J', 2: J'<K<J, 3: both above
    bool ok = true;
    std::string detail;
  };
  std::vector<std::vector<SiteRec>> records(cfg.samples,
                                            std::vector<SiteRec>(cfg.sites_per_sample));

  parallel_for(cfg.samples, cfg.jobs, [&](int s) {
    const auto j = sample(lattice, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    const auto jp = sample_prime(lattice, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    const double h_base = ground_state(j).energy;
    // Distinct random sites for this sample.
    const RngStream pick(mix_seed(cfg.seed, 0x517E), Stream::kTrial,
                         static_cast<std::uint32_t>(s));
    std::vector<SigmaIndex> sites;
    std::uint64_t draw = 0;
    while (static_cast<int>(sites.size()) < cfg.sites_per_sample) {
      const auto x = static_cast<SigmaIndex>(pick.uniform(draw++) * lattice->sigma_size());
      if (std::find(sites.begin(), sites.end(), x) == sites.end()) sites.push_back(x);
    }
    for (int i = 0; i < cfg.sites_per_sample; ++i) {
      SiteRec& r = records[s][i];
      r.site = sites[i];
      r.jx = j[r.site];
      r.jpx = jp[r.site];
      const auto k_opt = transition_point(j, r.site);
      if (!k_opt) {
        r.ok = false;
        r.detail = "transition point infeasible";
        continue;
      }
      r.k = *k_opt;
      const auto replaced = j.with_value(r.site, r.jpx, "replace");
      r.dh = ground_state(replaced).energy - h_base;
      const bool both_below = r.jx < r.k && r.jpx < r.k;
      const bool low_high = r.jx < r.k && r.k < r.jpx;
      const bool high_low = r.jpx < r.k && r.k < r.jx;
      r.kase = both_below ? 0 : (low_high ? 1 : (high_low ? 2 : 3));
      r.rhs = 0.0;
      if (both_below) r.rhs = r.jpx - r.jx;
      if (low_high) r.rhs = r.k - r.jx;
      if (high_low) r.rhs = r.jpx - r.k;
      r.err = std::abs(r.dh - r.rhs);
      r.e1 = low_high ? (r.k - r.jx) / (r.jpx - r.jx) : 0.0;
      r.e2 = high_low ? (r.jpx - r.k) / (r.jpx - r.jx) : 0.0;
      if (r.err > cfg.tolerance * j.magnitude()) {
        r.ok = false;
        std::ostringstream os;
        os << "identity breach: sample=" << s << " site=" << r.site << " J=" << r.jx
           << " J'=" << r.jpx << " K=" << r.k << " dH=" << r.dh << " rhs=" << r.rhs;
        r.detail = os.str();
      }
      if (std::abs(r.e1) > 1.0 || std::abs(r.e2) > 1.0) {
        r.ok = false;
        r.detail += " |E|>1";
      }
    }
  });

  ExperimentReport report;
  report.name = "derivative";
  report.lattice_spec = lattice->spec_string();
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension},
                   {"side", cfg.side},
                   {"sites_per_sample", cfg.sites_per_sample},
                   {"samples", cfg.samples},
                   {"distribution", cfg.dist.name()},
                   {"seed", cfg.seed},
                   {"tolerance", cfg.tolerance}};
  report.csv_header = {"sample", "site", "J", "J_prime", "K",  "dH",
                       "rhs",    "err",  "case", "E1",    "E2", "ok"};
  long fails = 0;
  double max_err = 0.0, max_e = 0.0;
  std::array<long, 4> case_counts{0, 0, 0, 0};
  std::vector<std::string> fail_details;
  for (int s = 0; s < cfg.samples; ++s) {
    for (const auto& r : records[s]) {
      report.csv_rows.push_back(join_csv(
          {std::to_string(s), std::to_string(r.site), format_double(r.jx), format_double(r.jpx),
           format_double(r.k), format_double(r.dh), format_double(r.rhs), format_double(r.err),
           std::to_string(r.kase), format_double(r.e1), format_double(r.e2),
           std::to_string(r.ok ? 1 : 0)}));
      if (!r.ok) {
        ++fails;
        if (fail_details.size() < 20) fail_details.push_back(r.detail);
      }
      ++case_counts[r.kase];
      max_err = std::max(max_err, r.err);
      max_e = std::max({max_e, std::abs(r.e1), std::abs(r.e2)});
    }
  }
  report.summary = {{"fail_count", fails},
                    {"max_identity_error", max_err},
                    {"max_abs_E", max_e},
                    {"case_counts",
                     {{"both_below", case_counts[0]},
                      {"J_below_K_below_Jprime", case_counts[1]},
                      {"Jprime_below_K_below_J", case_counts[2]},
                      {"both_above", case_counts[3]}}},
                    {"fail_details", fail_details}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// transition-point convergence

ExperimentReport transition_convergence_experiment(const TransitionConvergenceConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.pairs.empty()) throw ExperimentError("transition needs (R, n) pairs");
  for (const auto& [r, n] : cfg.pairs) {
    if (r > n) throw ExperimentError("transition pairs need R <= n");
    if (r < 3) throw ExperimentError("window sizes start at 3");
  }
  if (!(cfg.delta_moment > 0.0)) throw ExperimentError("delta_moment must be positive");
  const double q_exp = (16.0 + 4.0 * cfg.delta_moment) / cfg.delta_moment;
  const double outer = cfg.delta_moment / (4.0 + cfg.delta_moment);

  ExperimentReport report;
  report.name = "transition";
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension},
                   {"pairs", cfg.pairs},
                   {"extra_sites", cfg.extra_sites},
                   {"samples", cfg.samples},
                   {"distribution", cfg.dist.name()},
                   {"seed", cfg.seed},
                   {"delta_moment", cfg.delta_moment},
                   {"delta_grid", cfg.delta_grid}};
  report.csv_header = {"sample", "R", "n", "site", "K_n", "K_R", "abs_diff", "A1", "A2", "A3"};

  nlohmann::ordered_json per_pair = nlohmann::ordered_json::array();
  int max_n = 3;
  for (const auto& [r, n] : cfg.pairs) max_n = std::max(max_n, n);

  for (std::size_t pi = 0; pi < cfg.pairs.size(); ++pi) {
    const auto [r_size, n_size] = cfg.pairs[pi];
    const std::uint64_t pair_seed = mix_seed(cfg.seed, 1000003ull * r_size + n_size);
    const auto master = Lattice::torus(cfg.dimension, n_size);
    const auto window = make_window(master, r_size);
    const double beta = cfg.dist.lower_bound();

    // Sites: the center vertex and its +axis0 edge, plus any extra random
    // vertices inside the safe box around the center.
    std::vector<SigmaIndex> sites;
    std::vector<int> center_coords(cfg.dimension, n_size / 2);
    const std::int32_t center = master->vertex_at(center_coords);
    sites.push_back(master->vertex_sigma(center));
    sites.push_back(master->edge_sigma(master->torus_edge(center, 0)));
    const int safe = std::max(0, r_size / 2 - 1);
    const RngStream pick(mix_seed(pair_seed, 0x51735), Stream::kTrial);
    std::uint64_t draw = 0;
    while (static_cast<int>(sites.size()) < 2 + cfg.extra_sites) {
      std::vector<int> c(cfg.dimension);
      for (int i = 0; i < cfg.dimension; ++i) {
        c[i] = n_size / 2 - safe +
               static_cast<int>(pick.uniform(draw++) * (2 * safe + 1));
      }
      const SigmaIndex x = master->vertex_sigma(master->vertex_at(c));
      if (std::find(sites.begin(), sites.end(), x) == sites.end()) sites.push_back(x);
    }
    const int ns = static_cast<int>(sites.size());
    std::vector<std::int32_t> window_sites(ns);
    for (int i = 0; i < ns; ++i) window_sites[i] = window.window_sigma(sites[i]);

    struct Rec {
      double k_n = 0, k_r = 0, a1 = 0, a2 = 0, a3 = 0, max_k = 0;
    };
    std::vector<std::vector<Rec>> records(cfg.samples, std::vector<Rec>(ns));
    parallel_for(cfg.samples, cfg.jobs, [&](int s) {
      const auto j = sample(master, cfg.dist, pair_seed, static_cast<std::uint32_t>(s));
      const auto jp = sample_prime(master, cfg.dist, pair_seed, static_cast<std::uint32_t>(s));
      const auto wj = window_weights(window, j);
      for (int i = 0; i < ns; ++i) {
        Rec& rec = records[s][i];
        const SigmaIndex x = sites[i];
        const auto kn = transition_point(j, x);
        const auto kr = transition_point(wj, window_sites[i]);
        if (!kn || !kr) throw ExperimentError("transition point infeasible on a torus");
        rec.k_n = *kn;
        rec.k_r = *kr;
        rec.max_k = std::max(rec.k_n, rec.k_r);
        const double jx = j[x], jpx = jp[x];
        auto ind_below = [&](double k) { return (jx < k && jpx < k) ? 1.0 : 0.0; };
        auto e1 = [&](double k) { return (jx < k && k < jpx) ? (k - jx) / (jpx - jx) : 0.0; };
        auto e2 = [&](double k) { return (jpx < k && k < jx) ? (jpx - k) / (jpx - jx) : 0.0; };
        rec.a1 = ind_below(rec.k_n) - ind_below(rec.k_r);
        rec.a2 = e1(rec.k_n) - e1(rec.k_r);
        rec.a3 = e2(rec.k_n) - e2(rec.k_r);
      }
    });

    std::vector<double> abs_a1, abs_a2, abs_a3;
    double max_a = 0.0;
    double eps_moment = 0.0;
    std::vector<double> tail(cfg.delta_grid.size(), 0.0);
    for (int s = 0; s < cfg.samples; ++s) {
      for (int i = 0; i < ns; ++i) {
        const Rec& rec = records[s][i];
        report.csv_rows.push_back(join_csv(
            {std::to_string(s), std::to_string(r_size), std::to_string(n_size),
             std::to_string(sites[i]), format_double(rec.k_n), format_double(rec.k_r),
             format_double(std::abs(rec.k_n - rec.k_r)), format_double(rec.a1),
             format_double(rec.a2), format_double(rec.a3)}));
        abs_a1.push_back(std::abs(rec.a1));
        abs_a2.push_back(std::abs(rec.a2));
        abs_a3.push_back(std::abs(rec.a3));
        max_a = std::max({max_a, std::abs(rec.a1), std::abs(rec.a2), std::abs(rec.a3)});
        eps_moment += std::pow(std::abs(rec.a1 + rec.a2 + rec.a3), q_exp);
        for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di) {
          if (std::abs(rec.k_n - rec.k_r) > cfg.delta_grid[di] && rec.max_k > beta) {
            tail[di] += 1.0;
          }
        }
      }
    }
    const double total = static_cast<double>(cfg.samples) * ns;
    eps_moment /= total;
    nlohmann::ordered_json tails = nlohmann::ordered_json::array();
    for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di) {
      tails.push_back({{"delta", cfg.delta_grid[di]}, {"tail_probability", tail[di] / total}});
    }
    per_pair.push_back({{"R", r_size},
                        {"n", n_size},
                        {"sites", ns},
                        {"tails", tails},
                        {"mean_abs_A1", summary_json(summarize(abs_a1))},
                        {"mean_abs_A2", summary_json(summarize(abs_a2))},
                        {"mean_abs_A3", summary_json(summarize(abs_a3))},
                        {"max_abs_A", max_a},
                        {"epsilon", std::pow(eps_moment, outer)}});
  }
  report.lattice_spec = "t" + std::to_string(cfg.dimension) + "x" + std::to_string(max_n);
  report.summary = {{"per_pair", per_pair},
                    {"exponent", q_exp},
                    {"outer_exponent", outer}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

// ---------------------------------------------------------------------------
// critical droplet

ExperimentReport critical_droplet_experiment(const DropletConfig& cfg) {
  const auto t0 = Clock::now();
  const auto lattice = Lattice::torus(cfg.dimension, cfg.side);
  const SigmaIndex origin = 0;

  struct Rec {
    std::int32_t size = 0;
    std::int8_t is_loop = 0;
    std::int8_t contains_origin = 0;
    std::int8_t single_component = 0;
    std::int8_t feasible = 1;
  };
  std::vector<Rec> records(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](int s) {
    const auto j = sample(lattice, cfg.dist, cfg.seed, static_cast<std::uint32_t>(s));
    const auto m = ground_state(j).covering_ref();
    const bool status = m.occupied(origin);
    const auto flipped = constrained_ground_state(j, LocalConstraint::single(origin, !status));
    Rec& r = records[s];
    if (!flipped.feasible) {
      r.feasible = 0;
      return;
    }
    const auto decomp = sym_diff_decompose(m, flipped.covering_ref());
    r.size = static_cast<std::int32_t>(decomp.total_elements());
    r.single_component = decomp.components.size() == 1;
    for (const auto& c : decomp.components) {
      if (std::find(c.elements.begin(), c.elements.end(), origin) != c.elements.end()) {
        r.contains_origin = 1;
        r.is_loop = c.kind == SymDiffComponent::Kind::kLoop;
      }
    }
  });

  ExperimentReport report;
  report.name = "droplet";
  report.lattice_spec = lattice->spec_string();
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.config = {{"dimension", cfg.dimension}, {"side", cfg.side},
                   {"samples", cfg.samples},     {"distribution", cfg.dist.name()},
                   {"seed", cfg.seed}};
  report.csv_header = {"sample", "droplet_size", "is_loop", "contains_origin",
                       "single_component", "feasible"};
  std::vector<double> sizes;
  long violations = 0, infeasible = 0;
  std::map<std::int32_t, std::int64_t> hist;
  for (int s = 0; s < cfg.samples; ++s) {
    const Rec& r = records[s];
    report.csv_rows.push_back(join_csv(
        {std::to_string(s), std::to_string(r.size), std::to_string(r.is_loop),
         std::to_string(r.contains_origin), std::to_string(r.single_component),
         std::to_string(r.feasible)}));
    if (!r.feasible) {
      ++infeasible;
      continue;
    }
    sizes.push_back(r.size);
    ++hist[r.size];
    if (!r.single_component || !r.contains_origin) ++violations;
  }
  std::sort(sizes.begin(), sizes.end());
  auto percentile = [&](double p) {
    if (sizes.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(p * (sizes.size() - 1));
    return sizes[std::min(idx, sizes.size() - 1)];
  };
  nlohmann::ordered_json hist_json = nlohmann::ordered_json::object();
  for (const auto& [sz, c] : hist) hist_json[std::to_string(sz)] = c;
  report.summary = {{"median_size", percentile(0.5)},
                    {"p95_size", percentile(0.95)},
                    {"max_size", sizes.empty() ? 0.0 : sizes.back()},
                    {"size_histogram", hist_json},
                    {"structure_violations", violations},
                    {"infeasible_flips", infeasible}};
  report.wall_seconds = seconds_since(t0);
  return report;
}

}  // namespace mdgs
