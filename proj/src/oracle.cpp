#include "mqc/oracle.hpp"

#include "mqc/parallel.hpp"

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace mqc {

namespace ode = boost::numeric::odeint;

Superop oracle_decay_generator(double gamma, const TwoAtomBasis& basis) {
    if (!(gamma > 0.0)) throw InputError("gamma must be positive");
    const auto d = dipole_components();
    const Op4 id = Op4::Identity();
    std::vector<Op16> jumps;
    for (const auto& dk : d) {
        jumps.push_back(Eigen::kroneckerProduct(dk, id).eval());
        jumps.push_back(Eigen::kroneckerProduct(id, dk).eval());
    }
    return basis.superoperator([&](const Op16& rho) {
        Op16 r = Op16::Zero();
        for (const auto& j : jumps) {
            const Op16 jd = j.adjoint();
            const Op16 n = jd * j;
            r += j * rho * jd - 0.5 * (n * rho + rho * n);
        }
        return Op16(gamma * r);
    });
}

Superop oracle_generator(const Eigen::Matrix3cd& t, double gamma, const TwoAtomBasis& basis) {
    // the interaction is given in operator form; its state form is the adjoint
    const Superop vh = basis.superoperator(
        [&](const Op16& q) { return apply_interaction_liouvillian(t, q, InteractionPart::full); });
    return oracle_decay_generator(gamma, basis) + vh.adjoint();
}

Op4 oracle_kick_unitary(double area, Polarization p, double phase) {
    const Op4 s = dipole_lowering(p);
    const Op4 m = s.adjoint() * std::exp(kI * phase) + s * std::exp(-kI * phase);
    const Op4 a = (-kI * (0.5 * area)) * m;
    return a.exp();
}

void OracleRun::validate() const {
    configuration.validate();
    if (!(area >= 0.0)) throw InputError("oracle: area must be >= 0");
    if (phase_samples < 5) throw InputError("oracle: need at least 5 phase samples");
    if (position_samples < 3) throw InputError("oracle: need at least 3 position samples");
    for (double t : tau) {
        if (!(t >= 0.0)) throw InputError("oracle: delays must be >= 0");
    }
    if (!(rtol > 0.0) || !(atol > 0.0)) throw InputError("oracle: tolerances must be positive");
    if (!(fluorescence_horizon > 0.0)) throw InputError("oracle: horizon must be positive");
}

namespace {

using State = std::vector<cplx>;

struct LinearRhs {
    const Superop* l;
    Eigen::Index cols;
    void operator()(const State& x, State& dx, double) const {
        Eigen::Map<const Eigen::MatrixXcd> xm(x.data(), kPairDim, cols);
        Eigen::Map<Eigen::MatrixXcd> dm(dx.data(), kPairDim, cols);
        dm.noalias() = (*l) * xm;
    }
};

// rows w(t) = w0 exp(L t) together with their running integral
struct AdjointRhs {
    const Superop* lt;
    Eigen::Index cols;
    void operator()(const State& x, State& dx, double) const {
        Eigen::Map<const Eigen::MatrixXcd> w(x.data(), kPairDim, cols);
        Eigen::Map<Eigen::MatrixXcd> dw(dx.data(), kPairDim, cols);
        Eigen::Map<Eigen::MatrixXcd> dacc(dx.data() + kPairDim * cols, kPairDim, cols);
        dw.noalias() = (*lt) * w;
        dacc = w;
    }
};

template <class Rhs>
std::size_t integrate(Rhs rhs, State& x, double t0, double t1, double rtol, double atol) {
    if (t1 <= t0) return 0;
    auto stepper = ode::make_controlled(atol, rtol, ode::runge_kutta_fehlberg78<State>());
    try {
        return ode::integrate_adaptive(stepper, rhs, x, t0, t1, std::min(0.05, t1 - t0));
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "oracle integrator failed on [" << t0 << ", " << t1 << "]: " << e.what();
        throw NumericError(os.str());
    }
}

CoefficientVector kick_state(const CoefficientVector& v, const Op4& ua, const Op4& ub, const TwoAtomBasis& basis) {
    const Op16 u = Eigen::kroneckerProduct(ua, ub).eval();
    const Op16 rho = basis.reconstruct(v);
    return basis.expand(u * rho * u.adjoint());
}

Polarization second_polarization(PolarizationChannel c) {
    return c == PolarizationChannel::parallel ? Polarization::x : Polarization::y;
}

}  // namespace

OracleResult time_domain_evolve(const OracleRun& run) {
    run.validate();
    const TwoAtomBasis& basis = *shared_basis();
    const Eigen::Matrix3cd t = coupling_tensor(run.configuration, run.tensor_mode, run.gamma).t;
    const Superop l = oracle_generator(t, run.gamma, basis);
    const double area2 = run.second_area < 0 ? run.area : run.second_area;
    OracleResult out;

    // integrated detector rows
    Eigen::MatrixXcd w(kPairDim, 2);
    w.col(0) = detection_row(Direction::x, basis).transpose();
    w.col(1) = detection_row(Direction::y, basis).transpose();
    const Superop lt = l.transpose();
    State aug(static_cast<std::size_t>(2 * kPairDim * 2), cplx(0.0));
    Eigen::Map<Eigen::MatrixXcd>(aug.data(), kPairDim, 2) = w;
    out.steps += integrate(AdjointRhs{&lt, 2}, aug, 0.0, run.fluorescence_horizon / run.gamma, run.rtol, run.atol);
    const Eigen::MatrixXcd acc = Eigen::Map<const Eigen::MatrixXcd>(aug.data() + kPairDim * 2, kPairDim, 2);
    const Eigen::MatrixXcd rows = acc.transpose();   // 2 x 256

    // states after pulse 1, one column per pair of position phases
    const int np = run.position_samples;
    const Eigen::Index cols = np * np;
    std::vector<double> theta(static_cast<std::size_t>(np));
    for (int j = 0; j < np; ++j) theta[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / np;
    Op16 ground = Op16::Zero();
    ground(0, 0) = 1.0;
    const CoefficientVector rho0 = basis.expand(ground);
    State x(static_cast<std::size_t>(kPairDim * cols));
    Eigen::Map<Eigen::MatrixXcd> xm(x.data(), kPairDim, cols);
    for (int j1 = 0; j1 < np; ++j1) {
        for (int j2 = 0; j2 < np; ++j2) {
            xm.col(j1 * np + j2) = kick_state(rho0, oracle_kick_unitary(run.area, Polarization::x, theta[static_cast<std::size_t>(j1)]),
                                              oracle_kick_unitary(run.area, Polarization::x, theta[static_cast<std::size_t>(j2)]), basis);
        }
    }

    std::vector<std::size_t> order(run.tau.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return run.tau[a] < run.tau[b]; });
    out.integrated.resize(run.tau.size());
    out.harmonics.resize(run.tau.size());
    double now = 0.0;
    const Polarization pol2 = second_polarization(run.channel);
    const int nf = run.phase_samples;
    for (std::size_t oi : order) {
        const double target = run.tau[oi] / run.gamma;
        out.steps += integrate(LinearRhs{&l, cols}, x, now, target, run.rtol, run.atol);
        now = std::max(now, target);
        const Eigen::Map<const Eigen::MatrixXcd> cur(x.data(), kPairDim, cols);
        std::array<std::vector<double>, 2> samples;
        for (auto& s : samples) s.assign(static_cast<std::size_t>(nf), 0.0);
        for (int k = 0; k < nf; ++k) {
            const double phi2 = 2.0 * std::numbers::pi * k / nf;
            for (int j1 = 0; j1 < np; ++j1) {
                const Op4 ua = oracle_kick_unitary(area2, pol2, theta[static_cast<std::size_t>(j1)] + phi2);
                for (int j2 = 0; j2 < np; ++j2) {
                    const Op4 ub = oracle_kick_unitary(area2, pol2, theta[static_cast<std::size_t>(j2)] + phi2);
                    const CoefficientVector v = kick_state(cur.col(j1 * np + j2), ua, ub, basis);
                    const Eigen::VectorXcd iv = rows * v;
                    for (int d = 0; d < 2; ++d) samples[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)] += iv(d).real() / static_cast<double>(cols);
                }
            }
        }
        out.integrated[oi] = samples;
        for (int d = 0; d < 2; ++d) {
            for (int lh = -2; lh <= 2; ++lh) {
                out.harmonics[oi][static_cast<std::size_t>(d)][static_cast<std::size_t>(lh + 2)] =
                    numeric_demodulate(samples[static_cast<std::size_t>(d)], lh);
            }
        }
    }
    return out;
}

std::vector<TrajectorySample> evolve_trajectory(const OracleRun& run, double tau, double phi21,
                                                const std::vector<double>& t_fl, double theta1, double theta2) {
    run.validate();
    const TwoAtomBasis& basis = *shared_basis();
    const Eigen::Matrix3cd t = coupling_tensor(run.configuration, run.tensor_mode, run.gamma).t;
    const Superop l = oracle_generator(t, run.gamma, basis);
    const double area2 = run.second_area < 0 ? run.area : run.second_area;
    Op16 ground = Op16::Zero();
    ground(0, 0) = 1.0;
    CoefficientVector v = kick_state(basis.expand(ground), oracle_kick_unitary(run.area, Polarization::x, theta1),
                                     oracle_kick_unitary(run.area, Polarization::x, theta2), basis);
    State x(v.data(), v.data() + kPairDim);
    if (tau > 0.0) {
        integrate(LinearRhs{&l, 1}, x, 0.0, tau / run.gamma, run.rtol, run.atol);
    }
    if (tau >= 0.0) {
        const Polarization pol2 = second_polarization(run.channel);
        const CoefficientVector cur = Eigen::Map<const CoefficientVector>(x.data(), kPairDim);
        const CoefficientVector k = kick_state(cur, oracle_kick_unitary(area2, pol2, theta1 + phi21),
                                               oracle_kick_unitary(area2, pol2, theta2 + phi21), basis);
        x.assign(k.data(), k.data() + kPairDim);
    }
    const CoefficientRow rx = detection_row(Direction::x, basis);
    const CoefficientRow ry = detection_row(Direction::y, basis);
    Op16 excited = Op16::Zero();
    {
        const Op4 pe = excited_projector();
        const Op4 id = Op4::Identity();
        excited = Eigen::kroneckerProduct(pe, id).eval() + Eigen::kroneckerProduct(id, pe).eval();
    }
    std::vector<TrajectorySample> out;
    double now = 0.0;
    for (double tf : t_fl) {
        if (!(tf >= now * run.gamma)) throw InputError("trajectory times must be nondecreasing and >= 0");
        integrate(LinearRhs{&l, 1}, x, now, tf / run.gamma, run.rtol, run.atol);
        now = tf / run.gamma;
        const CoefficientVector c = Eigen::Map<const CoefficientVector>(x.data(), kPairDim);
        const Op16 rho = basis.reconstruct(c);
        TrajectorySample s;
        s.time = tf;
        s.trace = rho.trace().real();
        s.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        s.min_population = rho.diagonal().real().minCoeff();
        s.max_population = rho.diagonal().real().maxCoeff();
        s.excited_population = (excited * rho).trace().real();
        s.intensity = {(rx * c)(0).real(), (ry * c)(0).real()};
        out.push_back(s);
    }
    return out;
}

cplx numeric_demodulate(const std::vector<cplx>& samples, int l) {
    const int n = static_cast<int>(samples.size());
    if (n < 5) throw InputError("demodulation needs at least 5 samples");
    if (2 * std::abs(l) >= n) throw InputError("harmonic too high for the number of samples");
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) s += samples[static_cast<std::size_t>(k)] * std::exp(-kI * (2.0 * std::numbers::pi * l * k / n));
    return s / static_cast<double>(n);
}

cplx numeric_demodulate(const std::vector<double>& samples, int l) {
    return numeric_demodulate(std::vector<cplx>(samples.begin(), samples.end()), l);
}

namespace {

const ResponseExpansion& cached_expansion(double area, PolarizationChannel channel, double gamma, int kappa,
                                          Direction d, bool gamma_zero, bool interpulse) {
    static std::mutex mu;
    static std::map<std::tuple<double, int, double, int, int, bool, bool>, std::unique_ptr<ResponseExpansion>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(area, static_cast<int>(channel), gamma, kappa, static_cast<int>(d), gamma_zero, interpulse);
    auto& slot = cache[key];
    if (!slot) {
        const ScatteringModel model = make_model(area, channel, gamma, InteractionPart::full, gamma_zero);
        slot = std::make_unique<ResponseExpansion>(
            model, ResponseOptions{kappa, d, interpulse, 0.0, SectorPolicy::excise_stationary});
    }
    return *slot;
}

}  // namespace

OracleComparison compare_with_oracle(const OracleRun& run) {
    if (run.second_area >= 0 && run.second_area != run.area) {
        throw InputError("oracle comparison needs equal pulse areas");
    }
    const OracleResult res = time_domain_evolve(run);
    const Eigen::Matrix3cd t = coupling_tensor(run.configuration, run.tensor_mode, run.gamma).t;
    OracleComparison cmp;
    cmp.tau = run.tau;
    for (int d = 0; d < 2; ++d) {
        const Direction dir = d == 0 ? Direction::x : Direction::y;
        for (int l = 1; l <= 2; ++l) {
            const RationalResponse r =
                cached_expansion(run.area, run.channel, run.gamma, l, dir, false, true).fixed(t, true, false);
            auto& o = cmp.oracle[static_cast<std::size_t>(d)][static_cast<std::size_t>(l - 1)];
            auto& a = cmp.analytic[static_cast<std::size_t>(d)][static_cast<std::size_t>(l - 1)];
            double scale = 0.0, diff = 0.0;
            for (std::size_t i = 0; i < run.tau.size(); ++i) {
                o.push_back(res.harmonics[i][static_cast<std::size_t>(d)][static_cast<std::size_t>(l + 2)]);
                a.push_back(r.inverse_laplace(run.tau[i] / run.gamma));
                scale = std::max(scale, std::abs(a.back()));
                diff = std::max(diff, std::abs(o.back() - a.back()));
            }
            cmp.relative_error[static_cast<std::size_t>(d)][static_cast<std::size_t>(l - 1)] =
                scale > 0 ? diff / scale : diff;
        }
    }
    return cmp;
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double uniform_sample(std::uint64_t seed, std::uint64_t i, std::uint64_t k) {
    const std::uint64_t h = splitmix64(splitmix64(seed) ^ splitmix64(i * 8 + k + 0x632be59bd9b4e019ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SampledConfiguration sample_configuration(std::uint64_t seed, std::uint64_t i, double xi_lo, double xi_hi) {
    SampledConfiguration c;
    c.xi = xi_lo + (xi_hi - xi_lo) * uniform_sample(seed, i, 0);
    const double ct = 2.0 * uniform_sample(seed, i, 1) - 1.0;
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double ph = 2.0 * std::numbers::pi * uniform_sample(seed, i, 2);
    c.direction = {st * std::cos(ph), st * std::sin(ph), ct};
    c.direction.normalize();
    return c;
}

void MonteCarloRequest::validate() const {
    if (kappa != 1 && kappa != 2) throw InputError("kappa must be 1 or 2");
    if (samples < 1) throw InputError("Monte Carlo needs at least one sample");
    if (!(xi_lo > 0.0) || !(xi_hi > xi_lo)) throw InputError("distance window must satisfy 0 < lo < hi");
    if (detuning.empty()) throw InputError("Monte Carlo needs a detuning grid");
    SpectrumRequest r;
    r.kappa = kappa;
    r.detuning = detuning;
    r.area = area;
    r.gamma = gamma;
    r.validate();
}

MonteCarloResult monte_carlo_spectrum(const MonteCarloRequest& req) {
    req.validate();
    const ResponseExpansion& e = cached_expansion(req.area, req.channel.polarization, req.gamma, req.kappa,
                                                  req.channel.direction, req.gamma_zero, req.interaction_during_delay);
    std::vector<cplx> z;
    for (double d : req.detuning) z.push_back(kI * (d * req.gamma));
    const Eigen::MatrixXcd table = e.tag_pair_values(z);
    const Eigen::RowVectorXcd single = e.single_values(z);
    const double unit = req.gamma * req.gamma / std::sqrt(2.0 * std::numbers::pi);
    const Eigen::Index g = static_cast<Eigen::Index>(z.size());

    MonteCarloResult out;
    SpectrumSeries& s = out.mean;
    s.detuning = req.detuning;
    s.kappa = req.kappa;
    s.channel = req.channel;
    s.gamma_zero = req.gamma_zero;
    s.label = "mc_k" + std::to_string(req.kappa) + "_" + to_string(req.channel);

    Eigen::ArrayXd mean_re = Eigen::ArrayXd::Zero(g), mean_im = Eigen::ArrayXd::Zero(g);
    Eigen::ArrayXd m2_re = Eigen::ArrayXd::Zero(g), m2_im = Eigen::ArrayXd::Zero(g);
    const std::size_t chunk = 2048;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < req.samples; start += chunk) {
        const std::size_t n = std::min(chunk, req.samples - start);
        Eigen::MatrixXcd vals(g, static_cast<Eigen::Index>(n));
        std::vector<SampledConfiguration> confs(n);
        parallel_for(n, [&](std::size_t j) {
            const SampledConfiguration c = sample_configuration(req.seed, start + j, req.xi_lo, req.xi_hi);
            confs[j] = c;
            // the gamma -> 0 substitution already lives in the expansion's interaction
            const Eigen::Matrix3cd t = coupling_tensor(c.xi, c.direction, req.tensor_mode, req.gamma).t;
            const Eigen::VectorXcd w = fixed_tag_weights(t, req.mixed_only);
            vals.col(static_cast<Eigen::Index>(j)) = unit * (single + w.transpose() * table).transpose();
        });
        // sequential accumulation keeps results independent of the worker count
        for (std::size_t j = 0; j < n; ++j) {
            ++seen;
            const Eigen::ArrayXd re = vals.col(static_cast<Eigen::Index>(j)).real().array();
            const Eigen::ArrayXd im = vals.col(static_cast<Eigen::Index>(j)).imag().array();
            const Eigen::ArrayXd dre = re - mean_re, dim = im - mean_im;
            mean_re += dre / static_cast<double>(seen);
            mean_im += dim / static_cast<double>(seen);
            m2_re += dre * (re - mean_re);
            m2_im += dim * (im - mean_im);
            if (out.traces.size() < req.keep_traces) {
                out.traces.emplace_back(vals.col(static_cast<Eigen::Index>(j)).data(),
                                        vals.col(static_cast<Eigen::Index>(j)).data() + g);
                out.trace_configurations.push_back(confs[j]);
            }
        }
    }
    const double n = static_cast<double>(seen);
    for (Eigen::Index i = 0; i < g; ++i) {
        s.values.emplace_back(mean_re(i), mean_im(i));
        s.stderr_re.push_back(n > 1 ? std::sqrt(m2_re(i) / (n - 1) / n) : 0.0);
        s.stderr_im.push_back(n > 1 ? std::sqrt(m2_im(i) / (n - 1) / n) : 0.0);
    }
    return out;
}

std::vector<TensorAverageEntry> monte_carlo_tensor_averages(std::size_t samples, double xi_lo, double xi_hi,
                                                            std::uint64_t seed, TensorMode mode, double gamma) {
    if (samples < 2) throw InputError("tensor averages need at least two samples");
    const double scale = window_coupling_scale(xi_lo, xi_hi, gamma);
    std::vector<TensorAverageEntry> out;
    std::vector<cplx> mean(36, 0.0);
    std::vector<double> m2(36, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const SampledConfiguration c = sample_configuration(seed, i, xi_lo, xi_hi);
        const Eigen::Matrix3cd t = coupling_tensor(c.xi, c.direction, mode, gamma).t;
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                const std::size_t k = static_cast<std::size_t>(a * 6 + b);
                const cplx x = slot_value(t, a) * std::conj(slot_value(t, b));
                const cplx d = x - mean[k];
                mean[k] += d / static_cast<double>(i + 1);
                m2[k] += std::real(std::conj(d) * (x - mean[k]));
            }
        }
    }
    const double n = static_cast<double>(samples);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            const std::size_t k = static_cast<std::size_t>(a * 6 + b);
            auto [p, q] = slot_indices(a);
            auto [r, s] = slot_indices(b);
            out.push_back({a, b, mean[k], std::sqrt(m2[k] / (n - 1) / n), angular_average(p, q, r, s, scale)});
        }
    }
    return out;
}

}  // namespace mqc
