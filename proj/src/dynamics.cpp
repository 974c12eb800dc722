#include "fockbridge/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace fockbridge {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

void require(bool ok, const char* message) {
  if (!ok)
    throw std::invalid_argument(message);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Lagrange-Euler right-hand side with the 2N partial derivatives
// differentiated once up front.
struct Rhs {
  int modes;
  std::vector<PhiPiPolynomial> dphi, dpi;

  explicit Rhs(const HamiltonianSpec& h) : modes(h.modes) {
    dphi.reserve(static_cast<std::size_t>(modes));
    dpi.reserve(static_cast<std::size_t>(modes));
    for (int j = 1; j <= modes; ++j) {
      dphi.push_back(h.h.derivative({Var::Kind::phi, j}));
      dpi.push_back(h.h.derivative({Var::Kind::pi, j}));
    }
  }

  // y is the flattened state (phi_1..phi_N, pi_1..pi_N); out likewise
  // holds (phidot, pidot).
  void operator()(const std::vector<double>& y,
                  std::vector<double>& out) const {
    const std::size_t n = static_cast<std::size_t>(modes);
    const std::vector<double> phi(y.begin(), y.begin() + modes);
    const std::vector<double> pi(y.begin() + modes, y.end());
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = dpi[j].evaluate(phi, pi).real();
      out[n + j] = -dphi[j].evaluate(phi, pi).real();
    }
  }
};

std::vector<double> flatten(const ClassicalState& s) {
  std::vector<double> y(s.phi);
  y.insert(y.end(), s.pi.begin(), s.pi.end());
  return y;
}

ClassicalState unflatten(const std::vector<double>& y, int modes) {
  return {{y.begin(), y.begin() + modes}, {y.begin() + modes, y.end()}};
}

void rk4_step(const Rhs& f, std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  f(y, k1);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + 0.5 * dt * k1[i];
  f(tmp, k2);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + 0.5 * dt * k2[i];
  f(tmp, k3);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + dt * k3[i];
  f(tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void midpoint_step(const Rhs& f, std::vector<double>& y, double dt,
                   double t_now) {
  const std::size_t n = y.size();
  std::vector<double> k(n), knext(n), tmp(n);
  f(y, k);
  double residual = 0.0;
  for (int iter = 0; iter < 50; ++iter) {
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + 0.5 * dt * k[i];
    f(tmp, knext);
    residual = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(knext[i] - k[i]));
      scale = std::max(scale, std::abs(knext[i]));
    }
    k.swap(knext);
    if (!std::isfinite(residual))
      break;
    if (residual <= 1e-13 * scale) {
      for (std::size_t i = 0; i < n; ++i)
        y[i] += dt * k[i];
      return;
    }
  }
  throw std::runtime_error(
      "implicit midpoint stage did not converge: t=" + format_double(t_now) +
      ", dt=" + format_double(dt) + ", residual=" + format_double(residual) +
      " after 50 fixed-point iterations");
}

void check_state(const HamiltonianSpec& h, const ClassicalState& s,
                 const char* what) {
  require(static_cast<int>(s.phi.size()) == h.modes &&
              static_cast<int>(s.pi.size()) == h.modes,
          what);
  require(all_finite(s), "state entries must be finite");
}

// One gaussian per coordinate; coordinates 2p and 2p+1 share block p.
double gaussian_coordinate(std::uint64_t seed, std::uint64_t sample,
                           std::size_t coordinate) {
  const auto u = philox_uniforms(seed, sample, coordinate / 2);
  const double r = std::sqrt(-2.0 * std::log(1.0 - u[0]));
  const double angle = two_pi * u[1];
  return coordinate % 2 == 0 ? r * std::cos(angle) : r * std::sin(angle);
}

double uniform_coordinate(std::uint64_t seed, std::uint64_t sample,
                          std::size_t coordinate) {
  const auto u = philox_uniforms(seed, sample, coordinate / 2);
  return u[coordinate % 2];
}

} // namespace

bool all_finite(const ClassicalState& s) {
  for (double v : s.phi)
    if (!std::isfinite(v))
      return false;
  for (double v : s.pi)
    if (!std::isfinite(v))
      return false;
  return true;
}

HamiltonianSpec::HamiltonianSpec(int modes, PhiPiPolynomial h)
    : modes(modes), h(std::move(h)) {
  require(modes >= 1, "HamiltonianSpec needs at least one mode");
  require(this->h.modes() == modes,
          "Hamiltonian polynomial mode count mismatch");
  require(this->h.real_coefficients(),
          "Hamiltonian coefficients must be real");
}

std::array<std::uint32_t, 4> philox_block(std::uint64_t seed,
                                          std::uint64_t sample,
                                          std::uint64_t block) {
  std::uint32_t ctr[4] = {
      static_cast<std::uint32_t>(block),
      static_cast<std::uint32_t>(block >> 32),
      static_cast<std::uint32_t>(sample),
      static_cast<std::uint32_t>(sample >> 32),
  };
  std::uint32_t key[2] = {static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32)};
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
    const std::uint32_t next[4] = {
        static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
        static_cast<std::uint32_t>(p0),
    };
    ctr[0] = next[0];
    ctr[1] = next[1];
    ctr[2] = next[2];
    ctr[3] = next[3];
  }
  return {ctr[0], ctr[1], ctr[2], ctr[3]};
}

std::array<double, 2> philox_uniforms(std::uint64_t seed,
                                      std::uint64_t sample,
                                      std::uint64_t block) {
  const auto w = philox_block(seed, sample, block);
  const std::uint64_t a = (std::uint64_t{w[0]} << 32) | w[1];
  const std::uint64_t b = (std::uint64_t{w[2]} << 32) | w[3];
  constexpr double scale = 1.0 / 9007199254740992.0; // 2^-53
  return {static_cast<double>(a >> 11) * scale,
          static_cast<double>(b >> 11) * scale};
}

std::pair<std::vector<double>, std::vector<double>>
lagrange_euler_rhs(const HamiltonianSpec& h, const ClassicalState& s) {
  check_state(h, s, "lagrange_euler_rhs: state dimension mismatch");
  const Rhs f(h);
  std::vector<double> y = flatten(s);
  std::vector<double> out(y.size());
  f(y, out);
  const std::size_t n = static_cast<std::size_t>(h.modes);
  return {{out.begin(), out.begin() + h.modes}, {out.begin() + n, out.end()}};
}

Trajectory integrate(const HamiltonianSpec& h, const ClassicalState& s0,
                     double t_final, double dt, IntegrationMethod method) {
  check_state(h, s0, "integrate: state dimension mismatch");
  require(dt > 0.0, "integrate: dt must be positive");
  require(t_final >= 0.0, "integrate: t_final must be nonnegative");

  const Rhs f(h);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(s0);

  std::vector<double> y = flatten(s0);
  double t = 0.0;
  while (t < t_final * (1.0 - 1e-15)) {
    const double step = std::min(dt, t_final - t);
    if (method == IntegrationMethod::rk4)
      rk4_step(f, y, step);
    else
      midpoint_step(f, y, step, t);
    t = std::min(t + step, t_final);
    traj.times.push_back(t);
    traj.states.push_back(unflatten(y, h.modes));
  }
  return traj;
}

double energy(const HamiltonianSpec& h, const ClassicalState& s) {
  check_state(h, s, "energy: state dimension mismatch");
  return h.h.evaluate(s.phi, s.pi).real();
}

Ensemble sample_ensemble(const DistributionSpec& d, int count) {
  require(count >= 1, "sample_ensemble: count must be >= 1");
  require(!d.mean.empty() || d.kind == DistributionSpec::Kind::uniform_box,
          "sample_ensemble: empty distribution center");

  std::size_t coords = 0;
  const char* name = nullptr;
  switch (d.kind) {
  case DistributionSpec::Kind::delta_at_state:
    coords = d.mean.size();
    name = "delta-at-state";
    break;
  case DistributionSpec::Kind::product_gaussian:
    coords = d.mean.size();
    name = "product-gaussian";
    require(d.stddev.size() == coords,
            "sample_ensemble: gaussian stddev length mismatch");
    for (double s : d.stddev)
      require(s >= 0.0, "sample_ensemble: gaussian stddev must be >= 0");
    break;
  case DistributionSpec::Kind::uniform_box:
    coords = d.lo.size();
    name = "uniform-box";
    require(d.hi.size() == coords && coords > 0,
            "sample_ensemble: box bounds length mismatch");
    for (std::size_t i = 0; i < coords; ++i)
      require(d.lo[i] <= d.hi[i], "sample_ensemble: box bounds out of order");
    break;
  }
  require(coords % 2 == 0 && coords >= 2,
          "sample_ensemble: coordinate count must be 2N");
  const int modes = static_cast<int>(coords / 2);

  Ensemble e;
  e.seed = d.seed;
  e.distribution = name;
  e.samples.reserve(static_cast<std::size_t>(count));
  e.weights.assign(static_cast<std::size_t>(count),
                   1.0 / static_cast<double>(count));

  for (int k = 0; k < count; ++k) {
    std::vector<double> y(coords);
    switch (d.kind) {
    case DistributionSpec::Kind::delta_at_state:
      y = d.mean;
      break;
    case DistributionSpec::Kind::product_gaussian:
      for (std::size_t c = 0; c < coords; ++c)
        y[c] = d.mean[c] + d.stddev[c] *
                               gaussian_coordinate(
                                   d.seed, static_cast<std::uint64_t>(k), c);
      break;
    case DistributionSpec::Kind::uniform_box:
      for (std::size_t c = 0; c < coords; ++c)
        y[c] = d.lo[c] + (d.hi[c] - d.lo[c]) *
                             uniform_coordinate(
                                 d.seed, static_cast<std::uint64_t>(k), c);
      break;
    }
    e.samples.push_back(unflatten(y, modes));
  }
  return e;
}

Ensemble evolve_ensemble(const HamiltonianSpec& h, const Ensemble& e,
                         double t, double dt, IntegrationMethod method) {
  require(dt > 0.0, "evolve_ensemble: dt must be positive");
  require(t >= 0.0, "evolve_ensemble: t must be nonnegative");
  const Rhs f(h);
  Ensemble out = e;
  for (ClassicalState& s : out.samples) {
    check_state(h, s, "evolve_ensemble: sample dimension mismatch");
    if (t == 0.0)
      continue;
    std::vector<double> y = flatten(s);
    double now = 0.0;
    while (now < t * (1.0 - 1e-15)) {
      const double step = std::min(dt, t - now);
      if (method == IntegrationMethod::rk4)
        rk4_step(f, y, step);
      else
        midpoint_step(f, y, step, now);
      now = std::min(now + step, t);
    }
    s = unflatten(y, h.modes);
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const int modes =
      traj.states.empty() ? 0 : static_cast<int>(traj.states[0].phi.size());
  for (int j = 1; j <= modes; ++j)
    out += ",phi_" + std::to_string(j);
  for (int j = 1; j <= modes; ++j)
    out += ",pi_" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out += format_double(traj.times[i]);
    for (double v : traj.states[i].phi)
      out += "," + format_double(v);
    for (double v : traj.states[i].pi)
      out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string ensemble_csv(const Ensemble& e) {
  std::string out = "weight";
  const int modes =
      e.samples.empty() ? 0 : static_cast<int>(e.samples[0].phi.size());
  for (int j = 1; j <= modes; ++j)
    out += ",phi_" + std::to_string(j);
  for (int j = 1; j <= modes; ++j)
    out += ",pi_" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    out += format_double(e.weights[i]);
    for (double v : e.samples[i].phi)
      out += "," + format_double(v);
    for (double v : e.samples[i].pi)
      out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

namespace {

nlohmann::json state_json(const ClassicalState& s) {
  return nlohmann::json{{"phi", s.phi}, {"pi", s.pi}};
}

} // namespace

std::string trajectory_json(const Trajectory& traj) {
  nlohmann::json states = nlohmann::json::array();
  for (const ClassicalState& s : traj.states)
    states.push_back(state_json(s));
  const nlohmann::json body{{"times", traj.times}, {"states", states}};
  return body.dump(2);
}

std::string ensemble_json(const Ensemble& e) {
  nlohmann::json samples = nlohmann::json::array();
  for (const ClassicalState& s : e.samples)
    samples.push_back(state_json(s));
  const nlohmann::json body{{"seed", e.seed},
                            {"distribution", e.distribution},
                            {"weights", e.weights},
                            {"samples", samples}};
  return body.dump(2);
}

} // namespace fockbridge
