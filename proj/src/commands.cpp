#include "jscc/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "jscc/channel.hpp"
#include "jscc/codec.hpp"
#include "jscc/exponents.hpp"
#include "jscc/source.hpp"
#include "jscc/spbound.hpp"

namespace jscc {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

ChannelSpec make_channel(const ExperimentConfig& cfg, double es_n0) {
  if (cfg.channel.type == "bsc") {
    return ChannelSpec::bsc(cfg.channel.bsc_crossover);
  }
  return ChannelSpec::bi_awgn(es_n0);
}

double point_es_n0(const ExperimentConfig& cfg, const DiscreteSource& src,
                   double snr_db) {
  if (cfg.channel.snr_convention == "per_source_bit") {
    return ebn0_to_esn0(snr_db, SourceChannelRatio(cfg.t), src);
  }
  return std::pow(10.0, snr_db / 10.0);
}

// rows computed out of order, emitted in order
void parallel_rows(int count, int threads,
                   const std::function<void(int)>& work) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        work(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string cmd_exponents(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const DiscreteSource src = DiscreteSource::binary(cfg.source_p);
  const SourceChannelRatio t(cfg.t);
  std::vector<int> n_list;
  bool thm1 = false;
  if (cfg.scheme) {
    n_list = cfg.scheme->num_classes;
    thm1 = cfg.scheme->thm1;
  }
  if (n_list.empty()) n_list = {2};

  std::ostringstream header;
  header << "ebn0_db,e_sep,e_joint,e_hull";
  for (int nc : n_list) {
    if (nc >= 2) {
      header << ",e_thm2_N" << nc << ",r_lo_N" << nc << ",r_hi_N" << nc;
    }
    if (thm1 || nc == 1) header << ",e_thm1_N" << nc;
  }

  const std::vector<double> sweep = cfg.channel.snr.points();
  std::vector<std::string> rows(sweep.size());
  parallel_rows(static_cast<int>(sweep.size()), threads, [&](int i) {
    const double db = sweep[i];
    const ChannelSpec ch = make_channel(cfg, point_es_n0(cfg, src, db));
    std::ostringstream row;
    row << fmt(db) << ',' << fmt(separate_exponent(src, ch, t).value) << ','
        << fmt(joint_exponent(src, ch, t).value) << ','
        << fmt(joint_hull_exponent(src, ch, t).value);
    for (int nc : n_list) {
      if (nc >= 2) {
        const ExponentResult r = optimize_thm2(src, ch, t, nc);
        row << ',' << fmt(r.value) << ',' << fmt(r.rate_lo) << ','
            << fmt(r.rate_hi);
      }
      if (thm1 || nc == 1) {
        row << ',' << fmt(optimize_thm1(src, ch, t, nc).value);
      }
    }
    rows[i] = row.str();
  });

  std::ostringstream out;
  out << header.str() << '\n';
  for (const std::string& r : rows) out << r << '\n';
  return out.str();
}

std::string cmd_rates(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const DiscreteSource src = DiscreteSource::binary(cfg.source_p);
  const SourceChannelRatio t(cfg.t);
  int nc = 2;
  if (cfg.scheme && !cfg.scheme->num_classes.empty()) {
    nc = cfg.scheme->num_classes.front();
  }
  if (nc < 2) throw std::invalid_argument("rates: num_classes must be >= 2");
  const double ln2 = std::log(2.0);

  const std::vector<double> sweep = cfg.channel.snr.points();
  std::vector<std::string> rows(sweep.size());
  parallel_rows(static_cast<int>(sweep.size()), threads, [&](int i) {
    const double db = sweep[i];
    const ChannelSpec ch = make_channel(cfg, point_es_n0(cfg, src, db));
    const ExponentResult r = optimize_thm2(src, ch, t, nc);
    std::ostringstream row;
    row << fmt(db) << ',' << fmt3(r.rate_lo / ln2) << ','
        << fmt3(r.rate_hi / ln2) << ',' << fmt(r.rate_lo) << ','
        << fmt(r.rate_hi) << ',' << fmt(r.value);
    rows[i] = row.str();
  });

  std::ostringstream out;
  out << "ebn0_db,r_lo_bits,r_hi_bits,r_lo_nats,r_hi_nats,exponent\n";
  for (const std::string& r : rows) out << r << '\n';
  return out.str();
}

namespace {

CodecConfig codec_from_config(const ExperimentConfig& cfg) {
  if (!cfg.k || !cfg.n) {
    throw std::invalid_argument("simulate: ratio needs explicit k and n");
  }
  if (!cfg.scheme ||
      (cfg.scheme->code_files.empty() && cfg.scheme->k_dims.empty())) {
    throw std::invalid_argument("simulate: scheme needs code_files or k_dims");
  }
  CodecConfig codec{DiscreteSource::binary(cfg.source_p), *cfg.k, *cfg.n};
  if (!cfg.scheme->code_files.empty()) {
    for (const std::string& f : cfg.scheme->code_files) {
      codec.codes.push_back(LinearCode::load(f));
    }
  } else {
    std::uint64_t s = cfg.sim.seed;
    for (int kd : cfg.scheme->k_dims) {
      codec.codes.push_back(LinearCode::random_full_rank(*cfg.n, kd, ++s));
    }
  }
  codec.es_n0 = 1.0;
  codec.validate();
  return codec;
}

}  // namespace

std::string cmd_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const CodecConfig codec = codec_from_config(cfg);
  const std::vector<double> sweep = cfg.channel.snr.points();
  std::vector<double> es_n0_list;
  for (double db : sweep) es_n0_list.push_back(point_es_n0(cfg, codec.src, db));

  const std::vector<SimResult> results = simulate_fer(
      codec, es_n0_list, cfg.sim.trials, cfg.sim.seed, cfg.sim.min_errors);

  if (cfg.output.format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const SimResult& r = results[i];
      arr.push_back({{"snr_db", sweep[i]},
                     {"trials", r.trials},
                     {"fer", r.fer},
                     {"ci_lo", r.fer_ci95.lo},
                     {"ci_hi", r.fer_ci95.hi},
                     {"e_s", r.e_s},
                     {"e_ml", r.e_ml},
                     {"e_map", r.e_map},
                     {"seed", r.seed},
                     {"insufficient_errors", r.insufficient_errors}});
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "snr_db,trials,fer,ci_lo,ci_hi,e_s,e_ml,e_map,seed,"
         "insufficient_errors\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const SimResult& r = results[i];
    out << fmt(sweep[i]) << ',' << r.trials << ',' << fmt(r.fer) << ','
        << fmt(r.fer_ci95.lo) << ',' << fmt(r.fer_ci95.hi) << ',' << r.e_s
        << ',' << r.e_ml << ',' << r.e_map << ',' << r.seed << ','
        << (r.insufficient_errors ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string cmd_bound(const ExperimentConfig& cfg, int threads,
                      const std::string& join_csv) {
  cfg.validate();
  if (!cfg.k || !cfg.n) {
    throw std::invalid_argument("bound: ratio needs explicit k and n");
  }
  const DiscreteSource src = DiscreteSource::binary(cfg.source_p);
  const std::vector<double> sweep = cfg.channel.snr.points();
  std::vector<TwoClassBound> bounds(sweep.size());
  parallel_rows(static_cast<int>(sweep.size()), threads, [&](int i) {
    bounds[i] = two_class_lower_bound(*cfg.k, *cfg.n, cfg.source_p,
                                      point_es_n0(cfg, src, sweep[i]));
  });

  if (join_csv.empty()) {
    std::ostringstream out;
    out << "ebn0_db,bound,w1_opt,w2_opt,r1_bits,r2_bits\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      out << fmt(sweep[i]) << ',' << fmt(bounds[i].value) << ','
          << bounds[i].w1 << ',' << bounds[i].w2 << ','
          << fmt(bounds[i].r1_bits) << ',' << fmt(bounds[i].r2_bits) << '\n';
    }
    return out.str();
  }

  // join against a simulate CSV on the SNR column
  std::istringstream sim(join_csv);
  std::string line;
  if (!std::getline(sim, line) || line.rfind("snr_db,", 0) != 0) {
    throw std::invalid_argument("bound --join: not a simulate CSV");
  }
  std::vector<double> sim_db, sim_fer, sim_ci_hi;
  while (std::getline(sim, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 5) {
      throw std::invalid_argument("bound --join: malformed simulate row");
    }
    sim_db.push_back(std::stod(fields[0]));
    sim_fer.push_back(std::stod(fields[2]));
    sim_ci_hi.push_back(std::stod(fields[4]));
  }
  if (sim_db.size() != sweep.size()) {
    throw std::invalid_argument("bound --join: sweep size mismatch");
  }
  std::ostringstream out;
  out << "ebn0_db,bound,fer,ci_hi,violation\n";
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (std::fabs(sim_db[i] - sweep[i]) > 1e-9) {
      throw std::invalid_argument("bound --join: SNR grid mismatch");
    }
    const bool violation = sim_ci_hi[i] < bounds[i].value;
    out << fmt(sweep[i]) << ',' << fmt(bounds[i].value) << ','
        << fmt(sim_fer[i]) << ',' << fmt(sim_ci_hi[i]) << ','
        << (violation ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace jscc
