#include "occtime/export.hpp"

#include "occtime/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <ostream>

namespace occtime {

using json = nlohmann::ordered_json;

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw Error(ErrorKind::InvalidArgument, "unknown output format '" + std::string(name) + "'");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string optional_text(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string("undefined");
}

// Per-type writers.
struct Writer {
  Format format;
  std::ostream& out;

  void emit(const json& j) { out << j.dump(2) << "\n"; }

  void operator()(const LifetimeDistribution& d) {
    if (format == Format::Csv) {
      out << "n,probability\n";
      for (std::size_t n = 1; n < d.probs.size(); ++n)
        out << n << "," << format_number(d.probs[n]) << "\n";
      out << "tail_mass," << format_number(d.tail_mass) << "\n";
      return;
    }
    json probs = json::array();
    for (std::size_t n = 1; n < d.probs.size(); ++n) probs.push_back({{"n", n}, {"probability", number(d.probs[n])}});
    emit({{"kind", "lifetime_distribution"},
          {"horizon", d.horizon},
          {"tail_mass", number(d.tail_mass)},
          {"probabilities", std::move(probs)}});
  }

  void operator()(const OccupancyDistribution& d) {
    if (format == Format::Csv) {
      out << "a,probability\n";
      for (std::size_t a = 0; a < d.probs.size(); ++a)
        out << a << "," << format_number(d.probs[a]) << "\n";
      out << "tail_mass," << format_number(d.tail_mass) << "\n";
      return;
    }
    json probs = json::array();
    for (std::size_t a = 0; a < d.probs.size(); ++a) probs.push_back({{"a", a}, {"probability", number(d.probs[a])}});
    emit({{"kind", "occupancy_distribution"},
          {"horizon", d.horizon},
          {"tail_mass", number(d.tail_mass)},
          {"probabilities", std::move(probs)}});
  }

  void operator()(const MomentsReport& r) {
    const auto& m = r.moments;
    std::optional<SummaryStats> stats;
    if (m.raw.size() >= 2) stats = summary_stats(m.raw[0], m.raw[1]);
    if (format == Format::Csv) {
      out << "k,raw_moment\n";
      for (std::size_t k = 1; k <= m.raw.size(); ++k) out << k << "," << format_number(m.raw[k - 1]) << "\n";
      if (stats) {
        out << "mean," << format_number(stats->mean) << "\n";
        out << "variance," << format_number(stats->variance) << "\n";
        out << "cv," << optional_text(stats->coefficient_of_variation) << "\n";
      }
      out << "tail_mass," << format_number(m.tail_mass) << "\n";
      out << "horizon," << m.horizon << "\n";
      return;
    }
    json raw = json::array();
    for (std::size_t k = 1; k <= m.raw.size(); ++k) raw.push_back({{"k", k}, {"raw_moment", number(m.raw[k - 1])}});
    json j = {{"kind", "occupancy_moments"}, {"moments", std::move(raw)}};
    if (stats) {
      j["mean"] = number(stats->mean);
      j["variance"] = number(stats->variance);
      j["cv"] = optional_number(stats->coefficient_of_variation);
    }
    j["tail_mass"] = number(m.tail_mass);
    j["horizon"] = m.horizon;
    emit(j);
  }

  void operator()(const TwoLevelStats& s) {
    if (format == Format::Csv) {
      out << "n_sequences,mean,cv,within_var,between_var,total_var\n";
      out << s.n_sequences << "," << format_number(s.mean_of_means) << ","
          << optional_text(s.coefficient_of_variation) << "," << format_number(s.mean_within_variance)
          << "," << format_number(s.between_variance) << "," << format_number(s.total_variance) << "\n";
      out << "variance_convention,population\n";
      return;
    }
    emit({{"kind", "two_level_stats"},
          {"n_sequences", s.n_sequences},
          {"mean", number(s.mean_of_means)},
          {"cv", optional_number(s.coefficient_of_variation)},
          {"within_var", number(s.mean_within_variance)},
          {"between_var", number(s.between_variance)},
          {"total_var", number(s.total_variance)},
          {"variance_convention", "population"}});
  }

  void operator()(const SweepTable& t) {
    if (format == Format::Csv) {
      out << "p_f,p_o,p_u,mean,cv,within_var,between_var\n";
      for (const auto& p : t.points) {
        for (double q : p.probabilities) out << format_number(q) << ",";
        if (p.stats) {
          out << format_number(p.stats->mean_of_means) << ","
              << optional_text(p.stats->coefficient_of_variation) << ","
              << format_number(p.stats->mean_within_variance) << ","
              << format_number(p.stats->between_variance) << "\n";
        } else {
          out << "nan,nan,nan,nan\n";
        }
      }
      return;
    }
    json rows = json::array();
    for (const auto& p : t.points) {
      json row = {{"p_f", number(p.probabilities[0])},
                  {"p_o", number(p.probabilities[1])},
                  {"p_u", number(p.probabilities[2])}};
      if (p.stats) {
        row["mean"] = number(p.stats->mean_of_means);
        row["cv"] = optional_number(p.stats->coefficient_of_variation);
        row["within_var"] = number(p.stats->mean_within_variance);
        row["between_var"] = number(p.stats->between_variance);
        row["total_var"] = number(p.stats->total_variance);
      } else {
        row["error"] = p.error;
      }
      rows.push_back(std::move(row));
    }
    emit({{"kind", "simplex_sweep"},
          {"conditions", t.condition_labels},
          {"variance_convention", "population"},
          {"points", std::move(rows)}});
  }

  void operator()(const ValidationReport& r) {
    if (format == Format::Csv) {
      out << "matrix,quantity";
      for (const auto& label : r.states.labels()) out << "," << csv_field(label);
      out << "\n";
      for (const auto& m : r.matrices) {
        const Vector sums = m.matrix.column_sums();
        out << csv_field(m.name) << ",column_sum";
        for (Eigen::Index j = 0; j < sums.size(); ++j) out << "," << format_number(sums(j));
        out << "\n" << csv_field(m.name) << ",absorption";
        const Vector& b = m.matrix.absorption();
        for (Eigen::Index j = 0; j < b.size(); ++j) out << "," << format_number(b(j));
        out << "\n";
      }
      return;
    }
    json mats = json::array();
    for (const auto& m : r.matrices) {
      json sums = json::array(), abs = json::array();
      const Vector s = m.matrix.column_sums();
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        sums.push_back(number(s(j)));
        abs.push_back(number(m.matrix.absorption()(j)));
      }
      mats.push_back({{"name", m.name}, {"column_sums", std::move(sums)}, {"absorption", std::move(abs)}});
    }
    emit({{"kind", "validation"}, {"states", r.states.labels()}, {"matrices", std::move(mats)}});
  }

  void operator()(const SimulationReport& r) {
    const auto& hist = r.empirical.occupancy_histogram();
    const std::size_t len = std::max(hist.size(), r.analytic.probs.size());
    const double n = static_cast<double>(r.empirical.n_samples());
    auto empirical = [&](std::size_t a) {
      return a < hist.size() ? static_cast<double>(hist[a]) / n : 0.0;
    };
    if (format == Format::Csv) {
      out << "a,empirical,analytic\n";
      for (std::size_t a = 0; a < len; ++a)
        out << a << "," << format_number(empirical(a)) << "," << format_number(r.analytic.probability(a)) << "\n";
      out << "n_samples," << r.empirical.n_samples() << "\n";
      out << "seed," << r.seed << "\n";
      out << "empirical_mean," << format_number(r.empirical.mean()) << "\n";
      out << "empirical_variance," << format_number(r.empirical.variance()) << "\n";
      out << "standard_error," << format_number(r.empirical.standard_error()) << "\n";
      out << "analytic_mean," << format_number(r.analytic_mean) << "\n";
      out << "tv_distance," << format_number(r.tv_distance) << "\n";
      return;
    }
    json rows = json::array();
    for (std::size_t a = 0; a < len; ++a)
      rows.push_back({{"a", a}, {"empirical", number(empirical(a))}, {"analytic", number(r.analytic.probability(a))}});
    emit({{"kind", "simulation"},
          {"n_samples", r.empirical.n_samples()},
          {"seed", r.seed},
          {"empirical_mean", number(r.empirical.mean())},
          {"empirical_variance", number(r.empirical.variance())},
          {"standard_error", number(r.empirical.standard_error())},
          {"analytic_mean", number(r.analytic_mean)},
          {"tv_distance", number(r.tv_distance)},
          {"distribution", std::move(rows)}});
  }
};

}  // namespace

void export_results(const ExportResult& result, Format format, std::ostream& out) {
  std::visit(Writer{format, out}, result);
}

void export_results(const ExportResult& result, Format format, const std::string& destination) {
  if (destination.empty() || destination == "-") {
    export_results(result, format, std::cout);
    std::cout.flush();
    if (!std::cout) throw Error(ErrorKind::IoError, "failed writing to standard output");
    return;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open '" + destination + "' for writing");
  export_results(result, format, file);
  file.flush();
  if (!file) throw Error(ErrorKind::IoError, "failed writing '" + destination + "'");
}

}  // namespace occtime
