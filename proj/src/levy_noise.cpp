#include "gmflou/levy_noise.hpp"

#include <cmath>
#include <sstream>

#include "gmflou/errors.hpp"

namespace gmflou {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ParameterError(std::string("Levy spec: ") + name + " must be positive and finite");
    }
}

double jump_mean(const JumpDistribution& jumps) {
    return std::visit(overloaded{[](const NormalJumps& j) { return j.mean; },
                                 [](const ExponentialJumps& j) { return 1.0 / j.rate; }},
                      jumps);
}

double jump_second_moment(const JumpDistribution& jumps) {
    return std::visit(overloaded{[](const NormalJumps& j) { return j.mean * j.mean + j.sd * j.sd; },
                                 [](const ExponentialJumps& j) { return 2.0 / (j.rate * j.rate); }},
                      jumps);
}

}  // namespace

LevySpec::LevySpec(Kind kind) : kind_(std::move(kind)) {
    m2_ = std::visit(overloaded{[](const CompensatedGamma& g) {
                                   require_positive(g.a, "a");
                                   require_positive(g.b, "b");
                                   return g.a / (g.b * g.b);
                               },
                               [](const CompoundPoissonCompensated& cp) {
                                   require_positive(cp.rate, "rate");
                                   std::visit(overloaded{[](const NormalJumps& j) {
                                                             require_positive(j.sd, "jump sd");
                                                         },
                                                         [](const ExponentialJumps& j) {
                                                             require_positive(j.rate, "jump rate");
                                                         }},
                                              cp.jumps);
                                   return cp.rate * jump_second_moment(cp.jumps);
                               }},
                     kind_);
}

std::string LevySpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{[&](const CompensatedGamma& g) { os << "CompensatedGamma(a=" << g.a << ", b=" << g.b << ")"; },
                          [&](const CompoundPoissonCompensated& cp) {
                              os << "CompoundPoissonCompensated(rate=" << cp.rate << ", ";
                              std::visit(overloaded{[&](const NormalJumps& j) {
                                                        os << "Normal(" << j.mean << ", " << j.sd << "))";
                                                    },
                                                    [&](const ExponentialJumps& j) {
                                                        os << "Exponential(" << j.rate << "))";
                                                    }},
                                         cp.jumps);
                          }},
               kind_);
    return os.str();
}

double LevySpec::draw_increment(Sampler& sampler, double dt) const {
    return std::visit(
        overloaded{[&](const CompensatedGamma& g) {
                       const double shape = g.a * dt;
                       return sampler.gamma(shape) / g.b - shape / g.b;
                   },
                   [&](const CompoundPoissonCompensated& cp) {
                       const double mean_count = cp.rate * dt;
                       const auto count = sampler.poisson(mean_count);
                       const double n = static_cast<double>(count);
                       // Sums of i.i.d. jumps are drawn in one shot from their exact law.
                       const double total = std::visit(
                           overloaded{[&](const NormalJumps& j) {
                                          return count == 0 ? 0.0
                                                            : j.mean * n + j.sd * std::sqrt(n) * sampler.standard_normal();
                                      },
                                      [&](const ExponentialJumps& j) {
                                          return count == 0 ? 0.0 : sampler.gamma(n) / j.rate;
                                      }},
                           cp.jumps);
                       return total - mean_count * jump_mean(cp.jumps);
                   }},
        kind_);
}

std::vector<double> sample_increments(const LevySpec& spec, SeedLineage lineage, std::size_t n, double dt) {
    if (n < 1) throw ParameterError("sample_increments: n must be >= 1");
    if (!(dt > 0.0)) throw ParameterError("sample_increments: dt must be positive");
    Sampler sampler(lineage);
    std::vector<double> out(n);
    for (auto& x : out) x = spec.draw_increment(sampler, dt);
    return out;
}

void sample_increments(const LevySpec& spec, Sampler& sampler, std::span<const double> widths, std::span<double> out) {
    for (std::size_t i = 0; i < widths.size(); ++i) out[i] = spec.draw_increment(sampler, widths[i]);
}

namespace {

/// atan(x) - x without cancellation for small x.
double atan_minus_x(double x) {
    if (std::fabs(x) > 1e-2) return std::atan(x) - x;
    const double x2 = x * x;
    return x * x2 * (-1.0 / 3.0 + x2 * (1.0 / 5.0 + x2 * (-1.0 / 7.0 + x2 / 9.0)));
}

/// e^z - 1 - z without cancellation for small |z|.
std::complex<double> exp_minus_linear(std::complex<double> z) {
    if (std::abs(z) > 1e-2) return std::exp(z) - 1.0 - z;
    std::complex<double> term = 0.5 * z * z;
    std::complex<double> sum = term;
    for (int k = 3; k <= 8; ++k) {
        term *= z / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

}  // namespace

std::complex<double> cumulant_psi(const LevySpec& spec, double u) {
    using namespace std::complex_literals;
    return std::visit(
        overloaded{[&](const CompensatedGamma& g) -> std::complex<double> {
                       // -a log(1 - iu/b) - iua/b on the principal branch, split into
                       // real and imaginary parts that stay accurate as u -> 0.
                       const double x = u / g.b;
                       return {-0.5 * g.a * std::log1p(x * x), g.a * atan_minus_x(x)};
                   },
                   [&](const CompoundPoissonCompensated& cp) -> std::complex<double> {
                       return cp.rate * std::visit(
                                            overloaded{[&](const NormalJumps& j) -> std::complex<double> {
                                                           const std::complex<double> z(-0.5 * j.sd * j.sd * u * u,
                                                                                        u * j.mean);
                                                           return exp_minus_linear(z) - 0.5 * j.sd * j.sd * u * u;
                                                       },
                                                       [&](const ExponentialJumps& j) -> std::complex<double> {
                                                           const std::complex<double> w = 1i * (u / j.rate);
                                                           return w * w / (1.0 - w);
                                                       }},
                                            cp.jumps);
                   }},
        spec.kind());
}

double second_moment(const LevySpec& spec) { return spec.m2(); }

void to_json(nlohmann::json& j, const LevySpec& spec) {
    std::visit(overloaded{[&](const CompensatedGamma& g) {
                              j = {{"kind", "compensated_gamma"}, {"a", g.a}, {"b", g.b}};
                          },
                          [&](const CompoundPoissonCompensated& cp) {
                              nlohmann::json jump;
                              std::visit(overloaded{[&](const NormalJumps& n) {
                                                        jump = {{"type", "normal"}, {"mean", n.mean}, {"sd", n.sd}};
                                                    },
                                                    [&](const ExponentialJumps& e) {
                                                        jump = {{"type", "exponential"}, {"rate", e.rate}};
                                                    }},
                                         cp.jumps);
                              j = {{"kind", "compound_poisson"}, {"rate", cp.rate}, {"jump_dist", jump}};
                          }},
               spec.kind());
}

LevySpec levy_spec_from_json(const nlohmann::json& j) {
    const std::string kind = j.value("kind", std::string("compensated_gamma"));
    if (kind == "compensated_gamma") {
        return LevySpec(CompensatedGamma{j.value("a", 1.0), j.value("b", 2.0)});
    }
    if (kind == "compound_poisson") {
        CompoundPoissonCompensated cp;
        cp.rate = j.value("rate", 1.0);
        const auto jump = j.value("jump_dist", nlohmann::json::object());
        const std::string type = jump.value("type", std::string("normal"));
        if (type == "normal") {
            cp.jumps = NormalJumps{jump.value("mean", 0.0), jump.value("sd", 1.0)};
        } else if (type == "exponential") {
            cp.jumps = ExponentialJumps{jump.value("rate", 1.0)};
        } else {
            throw ParameterError("unknown jump_dist type '" + type + "'");
        }
        return LevySpec(cp);
    }
    throw ParameterError("unknown Levy kind '" + kind + "'");
}

}  // namespace gmflou
