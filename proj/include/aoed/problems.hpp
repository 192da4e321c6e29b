// Copyright 2026 The aoed Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Deterministic problem generation, noise calibration, and model file I/O.
//
// Three families:
//   diagonal        F = I, C_prior = diag(variances), d = 1. The analytic
//                   family with closed-form optima; noise_var defaults to 1
//                   (the convention all closed forms assume) instead of the
//                   calibrated value.
//   random_gaussian F has i.i.d. standard normal entries; C_prior =
//                   A'A/n + 1e-6 I with A standard normal. Unstructured
//                   stress-test family.
//   grid_source     n = g^2 source parameters on a uniform grid over
//                   [-E, E]^2, m sensors on the circle of radius 1.5E with
//                   seeded angle jitter, d Gaussian observation kernels of
//                   widths 0.15E(j+1) per sensor, squared-exponential prior.
//                   Desk-scale analogue of source reconstruction from
//                   boundary measurements.
//
// All randomness comes from SplitMix64(seed), so generate() is a pure
// function of its spec. The on-disk model format is a directory holding
// manifest.json plus F.csv, prior_cov.csv, prior_mean.csv at full precision;
// round-trips are bit-exact.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoed/csv.hpp"
#include "aoed/errors.hpp"
#include "aoed/model.hpp"
#include "aoed/rng.hpp"

namespace aoed {

enum class ProblemFamily { diagonal, random_gaussian, grid_source };

struct ProblemSpec {
  ProblemFamily family = ProblemFamily::diagonal;
  int m = 0;  // candidate sensors; diagonal family infers it from variances
  int d = 1;  // measurements per sensor
  int n = 0;  // parameter dimension; diagonal family infers it
  std::uint64_t seed = 0;
  double noise_percent = 1.0;       // calibration target, % of prior-predictive variance
  std::optional<double> noise_var;  // explicit override, skips calibration

  std::vector<double> variances;  // diagonal: prior variances, m = n = size

  double length_scale = 0.3;  // grid_source: prior kernel length scale
  double amplitude = 1.0;     // grid_source: prior marginal std deviation
  double extent = 1.0;        // grid_source: grid half-width E
};

/// sigma^2 = (noise_percent/100) * mean(diag(F C_prior F')), the closed form
/// of "a given percentage of the average prior-predictive variance".
inline double calibrate_noise(const Model& model, double noise_percent) {
  const double mean_variance =
      (model.forward * model.prior_cov).cwiseProduct(model.forward).sum() /
      static_cast<double>(model.forward.rows());
  return noise_percent / 100.0 * mean_variance;
}

namespace detail {

inline double mean_predictive_variance(const Eigen::MatrixXd& forward,
                                       const Eigen::MatrixXd& prior_cov) {
  return (forward * prior_cov).cwiseProduct(forward).sum() /
         static_cast<double>(forward.rows());
}

inline void check_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw InvalidSpec(std::string(name) + " must be > 0");
  }
}

}  // namespace detail

/// Deterministic model construction from a spec.
inline Model generate(const ProblemSpec& spec) {
  detail::check_positive(spec.noise_percent, "noise_percent");
  if (spec.noise_var && !(*spec.noise_var > 0.0)) {
    throw InvalidSpec("noise_var must be > 0");
  }

  Eigen::MatrixXd forward;
  Eigen::MatrixXd prior_cov;
  int m = spec.m;
  int d = spec.d;
  int n = spec.n;

  switch (spec.family) {
    case ProblemFamily::diagonal: {
      const int size = static_cast<int>(spec.variances.size());
      if (size < 1) throw InvalidSpec("diagonal family needs variances");
      for (double v : spec.variances) detail::check_positive(v, "variance");
      if ((spec.m != 0 && spec.m != size) || (spec.n != 0 && spec.n != size) ||
          (spec.d != 0 && spec.d != 1)) {
        throw InvalidSpec("diagonal family has m = n = #variances, d = 1");
      }
      m = n = size;
      d = 1;
      forward = Eigen::MatrixXd::Identity(n, n);
      prior_cov = Eigen::VectorXd::Map(spec.variances.data(), size)
                      .asDiagonal();
      break;
    }
    case ProblemFamily::random_gaussian: {
      if (m < 1 || d < 1 || n < 1) {
        throw InvalidSpec("random_gaussian family needs m, d, n >= 1");
      }
      SplitMix64 rng(spec.seed);
      forward.resize(m * d, n);
      for (Eigen::Index i = 0; i < forward.rows(); ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          forward(i, j) = rng.next_gaussian();
        }
      }
      Eigen::MatrixXd a(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
      }
      prior_cov = a.transpose() * a / static_cast<double>(n);
      prior_cov.diagonal().array() += 1e-6;
      break;
    }
    case ProblemFamily::grid_source: {
      if (m < 1 || d < 1 || n < 1) {
        throw InvalidSpec("grid_source family needs m, d, n >= 1");
      }
      const int g = static_cast<int>(std::lround(std::sqrt(double(n))));
      if (g * g != n) {
        throw InvalidSpec("grid_source family needs n to be a perfect square");
      }
      detail::check_positive(spec.length_scale, "length_scale");
      detail::check_positive(spec.amplitude, "amplitude");
      detail::check_positive(spec.extent, "extent");
      const double e = spec.extent;

      Eigen::MatrixXd points(n, 2);  // grid nodes, row-major over (iy, ix)
      for (int iy = 0; iy < g; ++iy) {
        for (int ix = 0; ix < g; ++ix) {
          const double x = g == 1 ? 0.0 : -e + 2.0 * e * ix / (g - 1);
          const double y = g == 1 ? 0.0 : -e + 2.0 * e * iy / (g - 1);
          points.row(iy * g + ix) << x, y;
        }
      }

      // Sensors sit on the circle of radius 1.5E at jittered equal angles;
      // the jitter is what makes distinct seeds produce distinct problems.
      SplitMix64 rng(spec.seed);
      Eigen::MatrixXd sensors(m, 2);
      for (int k = 0; k < m; ++k) {
        const double u = rng.next_double();
        const double theta = 2.0 * std::numbers::pi * (k + 0.5 * (u - 0.5)) / m;
        sensors.row(k) << 1.5 * e * std::cos(theta), 1.5 * e * std::sin(theta);
      }

      forward.resize(m * d, n);
      for (int k = 0; k < m; ++k) {
        for (int j = 0; j < d; ++j) {
          const double width = 0.15 * e * (j + 1);
          for (int i = 0; i < n; ++i) {
            const double dist2 =
                (sensors.row(k) - points.row(i)).squaredNorm();
            forward(k * d + j, i) = std::exp(-dist2 / (2.0 * width * width));
          }
        }
      }

      const double a2 = spec.amplitude * spec.amplitude;
      const double l2 = spec.length_scale * spec.length_scale;
      prior_cov.resize(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double dist2 = (points.row(i) - points.row(j)).squaredNorm();
          prior_cov(i, j) = a2 * std::exp(-dist2 / (2.0 * l2));
        }
      }
      prior_cov.diagonal().array() += 1e-8 * a2;
      break;
    }
  }

  double noise_var;
  if (spec.noise_var) {
    noise_var = *spec.noise_var;
  } else if (spec.family == ProblemFamily::diagonal) {
    noise_var = 1.0;
  } else {
    noise_var = spec.noise_percent / 100.0 *
                detail::mean_predictive_variance(forward, prior_cov);
  }
  return build_model(forward, m, d, prior_cov,
                     Eigen::VectorXd::Zero(n), noise_var);
}

inline std::string family_name(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::diagonal: return "diagonal";
    case ProblemFamily::random_gaussian: return "random_gaussian";
    case ProblemFamily::grid_source: return "grid_source";
  }
  return "unknown";
}

inline std::optional<ProblemFamily> family_from_name(const std::string& name) {
  if (name == "diagonal") return ProblemFamily::diagonal;
  if (name == "random_gaussian") return ProblemFamily::random_gaussian;
  if (name == "grid_source") return ProblemFamily::grid_source;
  return std::nullopt;
}

/// Human-readable provenance line recorded in saved manifests.
inline std::string generator_string(const ProblemSpec& spec) {
  std::ostringstream out;
  out << family_name(spec.family) << "(seed=" << spec.seed;
  if (spec.family == ProblemFamily::diagonal) {
    out << ";variances=";
    for (size_t i = 0; i < spec.variances.size(); ++i) {
      out << (i ? "," : "") << format_double(spec.variances[i]);
    }
  } else {
    out << ";m=" << spec.m << ";d=" << spec.d << ";n=" << spec.n;
    if (spec.family == ProblemFamily::grid_source) {
      out << ";length_scale=" << format_double(spec.length_scale)
          << ";amplitude=" << format_double(spec.amplitude)
          << ";extent=" << format_double(spec.extent);
    }
  }
  if (spec.noise_var) {
    out << ";noise_var=" << format_double(*spec.noise_var);
  } else {
    out << ";noise_percent=" << format_double(spec.noise_percent);
  }
  out << ")";
  return out.str();
}

/// A seeded grid_source instance on which the informed sweep deviates from
/// plain greedy: over budgets 3..10 the pruning path removes up to four
/// sensors per step, and at m0 = 10 the informed design beats greedy by
/// about 1.4% in objective value. The long prior length scale keeps the
/// effective parameter rank low, which is what makes greedy picks turn
/// redundant at larger budgets.
inline ProblemSpec pruning_demo_spec() {
  ProblemSpec spec;
  spec.family = ProblemFamily::grid_source;
  spec.m = 24;
  spec.d = 2;
  spec.n = 49;
  spec.seed = 2;
  spec.length_scale = 0.8;
  return spec;
}

/// Writes the model directory: manifest.json plus F.csv, prior_cov.csv and
/// prior_mean.csv at 17 significant digits. Each file is written atomically.
inline void save_model(const Model& model, const std::filesystem::path& dir,
                       const std::string& generator = "unspecified") {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + dir.string() + ": " +
                  ec.message());
  }

  nlohmann::json manifest{{"format_version", 1},
                          {"m", model.num_sensors},
                          {"d", model.block_size},
                          {"n", model.param_dim},
                          {"noise_var", model.noise_var},
                          {"generator", generator}};
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  std::ostringstream f_csv, cov_csv, mean_csv;
  write_matrix_csv(f_csv, model.forward);
  write_matrix_csv(cov_csv, model.prior_cov);
  write_matrix_csv(mean_csv, model.prior_mean);
  write_file_atomic(dir / "F.csv", f_csv.str());
  write_file_atomic(dir / "prior_cov.csv", cov_csv.str());
  write_file_atomic(dir / "prior_mean.csv", mean_csv.str());
}

inline Model load_model(const std::filesystem::path& dir) {
  nlohmann::json manifest;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) {
      throw IoError("cannot open " + (dir / "manifest.json").string());
    }
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("manifest.json: " + std::string(e.what()));
    }
  }

  long m, d, n;
  double noise_var;
  try {
    const long version = manifest.at("format_version").get<long>();
    if (version != 1) {
      throw FormatError("unsupported format_version " +
                        std::to_string(version) + ", expected 1");
    }
    m = manifest.at("m").get<long>();
    d = manifest.at("d").get<long>();
    n = manifest.at("n").get<long>();
    noise_var = manifest.at("noise_var").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest.json: " + std::string(e.what()));
  }

  const Eigen::MatrixXd forward = read_matrix_csv(dir / "F.csv");
  const Eigen::MatrixXd prior_cov = read_matrix_csv(dir / "prior_cov.csv");
  const Eigen::MatrixXd prior_mean = read_matrix_csv(dir / "prior_mean.csv");
  if (forward.rows() != m * d || forward.cols() != n) {
    throw FormatError("F.csv shape does not match manifest");
  }
  if (prior_cov.rows() != n || prior_cov.cols() != n) {
    throw FormatError("prior_cov.csv shape does not match manifest");
  }
  if (prior_mean.rows() != n || prior_mean.cols() != 1) {
    throw FormatError("prior_mean.csv shape does not match manifest");
  }
  return build_model(forward, m, d, prior_cov, prior_mean.col(0), noise_var);
}

}  // namespace aoed
