#include "mqc/spectra.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace mqc {

namespace {

constexpr double kHbar = 1.054571817e-34;
constexpr double kEpsilon0 = 8.8541878128e-12;
constexpr double kMu0 = 1.25663706212e-6;

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

CoefficientVector apply_product(const Superop16& a, const Superop16& b, const CoefficientVector& v) {
    Eigen::Map<const Eigen::Matrix<cplx, 16, 16, Eigen::RowMajor>> m(v.data());
    Eigen::Matrix<cplx, 16, 16, Eigen::RowMajor> r = a * m * b.transpose();
    return Eigen::Map<const CoefficientVector>(r.data(), kPairDim);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::string to_string(const DetectionChannel& c) {
    return to_string(c.direction) + "_" + to_string(c.polarization);
}

Op16 detection_operator(Direction d) {
    const Op4 single = cartesian_population(Polarization::z) +
                       cartesian_population(d == Direction::x ? Polarization::y : Polarization::x);
    const Op4 id = Op4::Identity();
    Op16 o = Op16::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                for (int l = 0; l < 4; ++l) {
                    o(4 * i + k, 4 * j + l) = single(i, j) * id(k, l) + id(i, j) * single(k, l);
                }
            }
        }
    }
    return o;
}

CoefficientRow detection_row(Direction d, const TwoAtomBasis& basis) {
    return basis.expectation_row(detection_operator(d));
}

std::array<cplx, 5> detection_projection(const AveragedComponents& components, Direction d,
                                         const TwoAtomBasis& basis) {
    const CoefficientRow row = detection_row(d, basis);
    std::array<cplx, 5> out{};
    for (int l = -2; l <= 2; ++l) {
        out[static_cast<std::size_t>(l + 2)] = (row * components.order(l))(0);
    }
    return out;
}

// ---------------------------------------------------------------- pole sets

const std::vector<std::array<int, 3>>& PoleSets::sets() {
    static const std::vector<std::array<int, 3>> s = [] {
        std::vector<std::array<int, 3>> v;
        for (int a = 0; a < 5; ++a) v.push_back({a, -1, -1});
        for (int a = 0; a < 5; ++a)
            for (int b = a; b < 5; ++b) v.push_back({a, b, -1});
        for (int a = 0; a < 5; ++a)
            for (int b = a; b < 5; ++b)
                for (int c = b; c < 5; ++c) v.push_back({a, b, c});
        return v;
    }();
    return s;
}

int PoleSets::count() { return static_cast<int>(sets().size()); }

int PoleSets::index(std::array<int, 3> sectors, int n) {
    if (n < 1 || n > 3) throw InputError("PoleSets::index: 1 to 3 factors");
    for (int i = n; i < 3; ++i) sectors[static_cast<std::size_t>(i)] = -1;
    std::sort(sectors.begin(), sectors.begin() + n);
    static const std::map<std::array<int, 3>, int> lookup = [] {
        std::map<std::array<int, 3>, int> m;
        for (int i = 0; i < static_cast<int>(sets().size()); ++i) m[sets()[static_cast<std::size_t>(i)]] = i;
        return m;
    }();
    auto it = lookup.find(sectors);
    if (it == lookup.end()) throw InputError("PoleSets::index: bad sector");
    return it->second;
}

cplx PoleSets::factor(int m, cplx z, double gamma) {
    cplx f = 1.0;
    for (int s : sets()[static_cast<std::size_t>(m)]) {
        if (s < 0) break;
        const cplx d = z + 0.5 * gamma * s;
        if (d == 0.0) throw PoleError("pole factor evaluated on its pole");
        f /= d;
    }
    return f;
}

double PoleSets::inverse(int m, double t, double gamma) {
    std::vector<double> r;
    for (int s : sets()[static_cast<std::size_t>(m)]) {
        if (s >= 0) r.push_back(0.5 * gamma * s);
    }
    auto e = [t](double l) { return std::exp(-l * t); };
    if (r.size() == 1) return e(r[0]);
    if (r.size() == 2) {
        if (r[0] == r[1]) return t * e(r[0]);
        return (e(r[0]) - e(r[1])) / (r[1] - r[0]);
    }
    // sorted, so repeated rates are adjacent
    if (r[0] == r[2]) return 0.5 * t * t * e(r[0]);
    if (r[0] != r[1] && r[1] != r[2]) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            double den = 1.0;
            for (int j = 0; j < 3; ++j) {
                if (j != i) den *= r[static_cast<std::size_t>(j)] - r[static_cast<std::size_t>(i)];
            }
            sum += e(r[static_cast<std::size_t>(i)]) / den;
        }
        return sum;
    }
    const double l = r[0] == r[1] ? r[0] : r[2];   // double root
    const double mu = r[0] == r[1] ? r[2] : r[0];
    const double d = mu - l;
    return e(mu) / (d * d) + e(l) * (t / d - 1.0 / (d * d));
}

cplx RationalResponse::operator()(cplx z1) const {
    cplx s = 0.0;
    for (int m = 0; m < coeff.size(); ++m) {
        if (coeff(m) != 0.0) s += coeff(m) * PoleSets::factor(m, z1, gamma);
    }
    return s;
}

cplx RationalResponse::inverse_laplace(double t) const {
    if (!(t >= 0.0)) throw InputError("inverse_laplace: t must be >= 0");
    cplx s = 0.0;
    for (int m = 0; m < coeff.size(); ++m) {
        if (coeff(m) != 0.0) s += coeff(m) * PoleSets::inverse(m, t, gamma);
    }
    return s;
}

// ---------------------------------------------------------------- response tables

int tag_index(int slot, bool conjugate) { return slot + (conjugate ? kTensorSlots : 0); }

cplx tag_value(const Eigen::Matrix3cd& t, int tag) {
    const cplx v = slot_value(t, tag % kTensorSlots);
    return tag >= kTensorSlots ? std::conj(v) : v;
}

Eigen::VectorXcd averaged_tag_weights(double scale, bool) {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(kTagPairs);
    for (int a = 0; a < kTagCount; ++a) {
        for (int b = 0; b < kTagCount; ++b) {
            const bool ca = a >= kTensorSlots;
            const bool cb = b >= kTensorSlots;
            if (ca == cb) continue;
            const int plain = ca ? b : a;
            const int conj = (ca ? a : b) - kTensorSlots;
            auto [k, l] = slot_indices(plain);
            auto [m, n] = slot_indices(conj);
            // integer numerators, one common factor applied last: keeps the
            // perpendicular cancellations exact in the weights
            w(a * kTagCount + b) = std::round(15.0 * angular_average(k, l, m, n, 1.0));
        }
    }
    return w * (scale / 15.0);
}

Eigen::VectorXcd fixed_tag_weights(const Eigen::Matrix3cd& t, bool mixed_only) {
    Eigen::VectorXcd w(kTagPairs);
    for (int a = 0; a < kTagCount; ++a) {
        for (int b = 0; b < kTagCount; ++b) {
            const bool mixed = (a >= kTensorSlots) != (b >= kTensorSlots);
            w(a * kTagCount + b) = (mixed_only && !mixed) ? cplx(0.0) : tag_value(t, a) * tag_value(t, b);
        }
    }
    return w;
}

ResponseExpansion::ResponseExpansion(const ScatteringModel& model, const ResponseOptions& options)
    : options_(options), gamma_(model.gamma()) {
    if (options.kappa != 1 && options.kappa != 2) throw InputError("kappa must be 1 or 2");
    const PairDecay& dec = model.decay();
    const TwoAtomBasis& basis = model.basis();
    const auto& v = model.interaction();
    const int npoles = PoleSets::count();
    single_ = Eigen::VectorXcd::Zero(npoles);
    pairs_ = Eigen::MatrixXcd::Zero(kTagPairs, npoles);

    std::array<const Superop*, kTagCount> m{};
    for (int t = 0; t < kTagCount; ++t) m[static_cast<std::size_t>(t)] = &v.coefficient(t % kTensorSlots, t >= kTensorSlots);

    // the interaction never feeds the stationary sector (it conserves the trace)
    {
        const CoefficientRow tr = basis.expectation_row(Op16::Identity());
        for (int t = 0; t < kTagCount; ++t) {
            const Superop& mt = *m[static_cast<std::size_t>(t)];
            if (max_abs(tr * mt) > 1e-12 * std::max(1.0, max_abs(mt))) {
                throw InvariantError("interaction does not annihilate the trace");
            }
        }
    }

    auto g2 = [&](const Eigen::MatrixXcd& rows) {
        return dec.apply_resolvent_rows(rows, options.z2, options.z2_policy);
    };

    // rows after pulse 2, built from the detector backwards
    const Eigen::MatrixXcd a = g2(detection_row(options.direction, basis));
    Eigen::MatrixXcd b(kTagCount, kPairDim);
    for (int t = 0; t < kTagCount; ++t) b.row(t) = a * *m[static_cast<std::size_t>(t)];
    b = g2(b);
    Eigen::MatrixXcd c(kTagPairs, kPairDim);
    for (int first = 0; first < kTagCount; ++first) {
        for (int second = 0; second < kTagCount; ++second) {
            c.row(first * kTagCount + second) = b.row(second) * *m[static_cast<std::size_t>(first)];
        }
    }
    c = g2(c);

    CoefficientVector rho0 = initial_vector(basis).terms().begin()->second;
    const KickDecomposition& k1 = model.kick(1);
    auto stationary_free = [&](const CoefficientVector& x) {
        const double ref = max_abs(x);
        if (ref > 0 && max_abs(dec.sector(0) * x) > 1e-10 * ref) {
            throw PoleError("z1 chain populates the stationary sector");
        }
    };

    for (int pa = -2; pa <= 2; ++pa) {
        for (int pc = -2; pc <= 2; ++pc) {
            if (pa + pc != -options.kappa) continue;
            const CoefficientVector u0 = apply_product(k1.harmonic(pa), k1.harmonic(pc), rho0);
            if (max_abs(u0) <= 1e-15) continue;
            stationary_free(u0);
            const Superop r2 = model.pair_kick(2, -pa, -pc);
            std::array<CoefficientVector, 5> us;
            for (int s = 1; s < 5; ++s) us[static_cast<std::size_t>(s)] = dec.sector(s) * u0;

            const Eigen::RowVectorXcd q = a * r2;
            const Eigen::MatrixXcd rows0 = c * r2;
            for (int s = 1; s < 5; ++s) {
                const int idx = PoleSets::index({s, -1, -1}, 1);
                // a projection below its own rounding bound is structurally zero
                // (uncoupled atoms never emit along x); flush it so it cannot
                // masquerade as signal next to the small coupled terms
                const CoefficientVector& u = us[static_cast<std::size_t>(s)];
                const cplx dot = (q * u)(0);
                const double bound = 4.0 * kPairDim * std::numeric_limits<double>::epsilon() *
                                     (q.cwiseAbs().transpose().cwiseProduct(u.cwiseAbs())).sum();
                if (std::abs(dot) > bound) single_(idx) += dot;
                pairs_.col(idx) += rows0 * us[static_cast<std::size_t>(s)];
            }
            if (!options.interaction_during_delay) continue;

            // y(first, s0) = M_first P_s0 u0
            Eigen::MatrixXcd y(kPairDim, kTagCount * 4);
            for (int first = 0; first < kTagCount; ++first) {
                for (int s0 = 1; s0 < 5; ++s0) {
                    CoefficientVector col = *m[static_cast<std::size_t>(first)] * us[static_cast<std::size_t>(s0)];
                    stationary_free(col);
                    y.col(first * 4 + (s0 - 1)) = col;
                }
            }
            // one insertion before pulse 2, one after
            const Eigen::MatrixXcd rows1 = b * r2;
            for (int s1 = 1; s1 < 5; ++s1) {
                const Eigen::MatrixXcd vals = rows1 * (dec.sector(s1) * y);   // second x (first, s0)
                for (int second = 0; second < kTagCount; ++second) {
                    for (int first = 0; first < kTagCount; ++first) {
                        for (int s0 = 1; s0 < 5; ++s0) {
                            pairs_(first * kTagCount + second, PoleSets::index({s0, s1, -1}, 2)) +=
                                vals(second, first * 4 + (s0 - 1));
                        }
                    }
                }
            }
            // both insertions before pulse 2
            Eigen::MatrixXcd r3(4 * kTagCount * 4, kPairDim);
            for (int s2 = 1; s2 < 5; ++s2) {
                const Eigen::RowVectorXcd qs = q * dec.sector(s2);
                for (int second = 0; second < kTagCount; ++second) {
                    const Eigen::RowVectorXcd qb = qs * *m[static_cast<std::size_t>(second)];
                    for (int s1 = 1; s1 < 5; ++s1) {
                        r3.row(((s2 - 1) * kTagCount + second) * 4 + (s1 - 1)) = qb * dec.sector(s1);
                    }
                }
            }
            const Eigen::MatrixXcd vals = r3 * y;
            for (int s2 = 1; s2 < 5; ++s2) {
                for (int second = 0; second < kTagCount; ++second) {
                    for (int s1 = 1; s1 < 5; ++s1) {
                        const int row = ((s2 - 1) * kTagCount + second) * 4 + (s1 - 1);
                        for (int first = 0; first < kTagCount; ++first) {
                            for (int s0 = 1; s0 < 5; ++s0) {
                                pairs_(first * kTagCount + second, PoleSets::index({s0, s1, s2}, 3)) +=
                                    vals(row, first * 4 + (s0 - 1));
                            }
                        }
                    }
                }
            }
        }
    }
}

RationalResponse ResponseExpansion::single_scattering() const { return {single_, gamma_}; }

RationalResponse ResponseExpansion::contract(const Eigen::VectorXcd& w, bool include_single) const {
    if (w.size() != kTagPairs) throw InputError("contract: expected 144 tag-pair weights");
    RationalResponse r{pairs_.transpose() * w, gamma_};
    if (include_single) r.coeff += single_;
    return r;
}

RationalResponse ResponseExpansion::averaged(double scale, bool include_single) const {
    return contract(averaged_tag_weights(scale), include_single);
}

RationalResponse ResponseExpansion::fixed(const Eigen::Matrix3cd& t, bool include_single, bool mixed_only) const {
    return contract(fixed_tag_weights(t, mixed_only), include_single);
}

Eigen::MatrixXcd ResponseExpansion::tag_pair_values(const std::vector<cplx>& z1) const {
    Eigen::MatrixXcd f(PoleSets::count(), static_cast<Eigen::Index>(z1.size()));
    for (int mset = 0; mset < PoleSets::count(); ++mset) {
        for (std::size_t i = 0; i < z1.size(); ++i) {
            const bool used = pairs_.col(mset).cwiseAbs().maxCoeff() > 0 || single_(mset) != 0.0;
            f(mset, static_cast<Eigen::Index>(i)) = used ? PoleSets::factor(mset, z1[i], gamma_) : cplx(0.0);
        }
    }
    return pairs_ * f;
}

Eigen::RowVectorXcd ResponseExpansion::single_values(const std::vector<cplx>& z1) const {
    Eigen::RowVectorXcd out(static_cast<Eigen::Index>(z1.size()));
    const RationalResponse r = single_scattering();
    for (std::size_t i = 0; i < z1.size(); ++i) out(static_cast<Eigen::Index>(i)) = r(z1[i]);
    return out;
}

// ---------------------------------------------------------------- spectra

void SpectrumRequest::validate() const {
    if (kappa != 1 && kappa != 2) throw InputError("kappa must be 1 or 2");
    if (!(area >= 0.0) || !std::isfinite(area)) throw InputError("pulse area must be >= 0");
    if (!(xibar > 0.0)) throw InputError("mean scaled distance must be positive");
    if (!(gamma > 0.0)) throw InputError("gamma must be positive");
    for (std::size_t i = 0; i < detuning.size(); ++i) {
        if (!std::isfinite(detuning[i])) throw InputError("detuning grid must be finite");
        if (i > 0 && !(detuning[i] > detuning[i - 1])) throw InputError("detuning grid must be strictly increasing");
    }
}

std::vector<double> default_detuning_grid(int points, double half_width) {
    if (points < 2 || !(half_width > 0)) throw InputError("grid needs >= 2 points and positive width");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = -half_width + 2.0 * half_width * i / (points - 1);
    return g;
}

std::shared_ptr<const InteractionDecomposition> shared_interaction(InteractionPart part, bool gamma_zero) {
    static std::mutex mu;
    static std::map<std::pair<int, bool>, std::shared_ptr<const InteractionDecomposition>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(part), gamma_zero);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const InteractionDecomposition> d;
    if (gamma_zero) {
        auto base = std::make_shared<InteractionDecomposition>(*shared_basis(), part);
        d = std::make_shared<InteractionDecomposition>(base->without_collective_decay());
    } else {
        d = std::make_shared<InteractionDecomposition>(*shared_basis(), part);
    }
    cache[key] = d;
    return d;
}

ScatteringModel make_model(double area, PolarizationChannel channel, double gamma, InteractionPart part,
                           bool gamma_zero) {
    return ScatteringModel(area, channel, gamma, shared_basis(), shared_interaction(part, gamma_zero));
}

namespace {

SpectrumSeries empty_series(const SpectrumRequest& r) {
    SpectrumSeries s;
    s.detuning = r.detuning;
    s.kappa = r.kappa;
    s.channel = r.channel;
    s.gamma_zero = r.gamma_zero;
    s.label = "k" + std::to_string(r.kappa) + "_" + to_string(r.channel) + (r.gamma_zero ? "_gamma0" : "");
    return s;
}

}  // namespace

SpectrumSeries spectrum(const SpectrumRequest& request) {
    request.validate();
    const ScatteringModel model =
        make_model(request.area, request.channel.polarization, request.gamma, request.part, request.gamma_zero);
    const ResponseExpansion expansion(
        model, {request.kappa, request.channel.direction, request.interaction_during_delay, 0.0,
                SectorPolicy::excise_stationary});
    const RationalResponse r = expansion.averaged(coupling_scale(request.xibar, request.gamma));
    SpectrumSeries s = empty_series(request);
    const double unit = request.gamma * request.gamma * kInvSqrt2Pi;
    for (double d : request.detuning) s.values.push_back(unit * r(kI * (d * request.gamma)));
    return s;
}

SpectrumSeries spectrum_reference(const SpectrumRequest& request) {
    request.validate();
    const ScatteringModel model =
        make_model(request.area, request.channel.polarization, request.gamma, request.part, request.gamma_zero);
    ExpansionOptions opt;
    opt.interaction_during_delay = request.interaction_during_delay;
    opt.target_order = request.kappa;
    opt.prune_position_phases = true;
    const double scale = coupling_scale(request.xibar, request.gamma);
    SpectrumSeries s = empty_series(request);
    const double unit = request.gamma * request.gamma * kInvSqrt2Pi;
    for (double d : request.detuning) {
        const cplx z1 = kI * (d * request.gamma);
        PhaseTaggedVector total = scattering_solution(0, z1, 0.0, model, opt);
        const PhaseTaggedVector part = scattering_solution(2, z1, 0.0, model, opt);
        for (const auto& [m, v] : part.terms()) total.add(m, v);
        const auto proj = detection_projection(average_state(total, scale), request.channel.direction, model.basis());
        s.values.push_back(unit * proj[static_cast<std::size_t>(request.kappa + 2)]);
    }
    return s;
}

double normalized_peak(const SpectrumRequest& request) {
    SpectrumRequest r = request;
    r.detuning = {0.0};
    return std::sqrt(2.0 * std::numbers::pi) * spectrum(r).values[0].real();
}

PoleCrossCheck z2_pole_cross_check(const SpectrumRequest& request, double detuning) {
    request.validate();
    const ScatteringModel model =
        make_model(request.area, request.channel.polarization, request.gamma, request.part, request.gamma_zero);
    const double scale = coupling_scale(request.xibar, request.gamma);
    const cplx z1 = kI * (detuning * request.gamma);
    auto eval = [&](cplx z2, SectorPolicy policy) {
        const ResponseExpansion e(model, {request.kappa, request.channel.direction,
                                          request.interaction_during_delay, z2, policy});
        return e.averaged(scale)(z1);
    };
    PoleCrossCheck out;
    out.restricted = eval(0.0, SectorPolicy::excise_stationary);
    const double g = request.gamma;
    const cplx f1 = eval(1e-6 * g, SectorPolicy::full);
    const cplx f2 = eval(1e-7 * g, SectorPolicy::full);
    const cplx f3 = eval(1e-8 * g, SectorPolicy::full);
    const cplx r12 = (10.0 * f2 - f1) / 9.0;
    const cplx r23 = (10.0 * f3 - f2) / 9.0;
    out.extrapolated = (100.0 * r23 - r12) / 99.0;
    out.relative_difference = std::abs(out.extrapolated - out.restricted) / std::abs(out.restricted);
    return out;
}

std::vector<PeakEntry> table1_leading_order(double area, double xibar) {
    if (!(xibar > 0.0)) throw InputError("mean scaled distance must be positive");
    const double a2 = area * area;
    const double a4 = a2 * a2;
    const double x2 = xibar * xibar;
    using P = PolarizationChannel;
    return {{1, Direction::x, P::parallel, 3.0 * a2 / (10.0 * x2)},
            {1, Direction::y, P::parallel, a2},
            {1, Direction::x, P::perpendicular, 0.0},
            {1, Direction::y, P::perpendicular, 0.0},
            {2, Direction::x, P::parallel, -3.0 * a4 / (320.0 * x2)},
            {2, Direction::x, P::perpendicular, -3.0 * a4 / (1280.0 * x2)},
            {2, Direction::y, P::parallel, -51.0 * a4 / (640.0 * x2)},
            {2, Direction::y, P::perpendicular, -3.0 * a4 / (1280.0 * x2)}};
}

std::vector<PeakEntry> table1_computed(double area, double xibar, bool interaction_during_delay, bool gamma_zero) {
    std::vector<PeakEntry> out = table1_leading_order(area, xibar);
    for (auto& e : out) {
        SpectrumRequest r;
        r.kappa = e.kappa;
        r.channel = {e.direction, e.channel};
        r.area = area;
        r.xibar = xibar;
        r.interaction_during_delay = interaction_during_delay;
        r.gamma_zero = gamma_zero;
        e.value = normalized_peak(r);
    }
    return out;
}

double fitted_leading_coefficient(int kappa, DetectionChannel channel, double xibar, double area1, double area2) {
    if (!(area1 > 0.0) || !(area2 > area1)) throw InputError("fit needs 0 < area1 < area2");
    auto peak = [&](double a) {
        SpectrumRequest r;
        r.kappa = kappa;
        r.channel = channel;
        r.area = a;
        r.xibar = xibar;
        return normalized_peak(r);
    };
    // P = A x^k + B x^(k+1), x = area^2
    const double x1 = area1 * area1, x2 = area2 * area2;
    const double p1 = peak(area1) / std::pow(x1, kappa);
    const double p2 = peak(area2) / std::pow(x2, kappa);
    // p = A + B x
    return (p1 * x2 - p2 * x1) / (x2 - x1);
}

double fitted_area_exponent(int kappa, DetectionChannel channel, double xibar, const std::vector<double>& areas) {
    if (areas.size() < 2) throw InputError("exponent fit needs at least two areas");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double a : areas) {
        SpectrumRequest r;
        r.kappa = kappa;
        r.channel = channel;
        r.area = a;
        r.xibar = xibar;
        const double x = std::log(a);
        const double y = std::log(std::abs(normalized_peak(r)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(areas.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- dimensional helpers

double resonant_cross_section(double lambda0) {
    if (!(lambda0 > 0.0)) throw InputError("lambda0 must be positive");
    return 3.0 * lambda0 * lambda0 / (2.0 * std::numbers::pi);
}

double mean_scattering_cross_section(double lambda0, double gamma, double doppler_rms) {
    if (!(lambda0 > 0.0) || !(gamma > 0.0) || !(doppler_rms > 0.0)) {
        throw InputError("cross section: all parameters must be positive");
    }
    // the detuning is the sum of three independent Gaussian components,
    // hence itself Gaussian with variance 3 rms^2
    const double s = std::sqrt(3.0) * doppler_rms;
    const double w = gamma / (2.0 * s);   // Lorentzian half width in units of s
    auto f = [w](double u) {
        return std::exp(-0.5 * u * u) / (1.0 + (u / w) * (u / w)) / std::sqrt(2.0 * std::numbers::pi);
    };
    using boost::math::quadrature::gauss_kronrod;
    const double split = std::min(40.0, 50.0 * w);
    double err1 = 0, err2 = 0;
    const double i1 = gauss_kronrod<double, 61>::integrate(f, 0.0, split, 20, 1e-13, &err1);
    double i2 = 0.0;
    if (split < 40.0) i2 = gauss_kronrod<double, 61>::integrate(f, split, 40.0, 20, 1e-13, &err2);
    const double total = 2.0 * (i1 + i2);
    if (!std::isfinite(total) || err1 + err2 > 1e-9 * std::abs(i1 + i2)) {
        throw NumericError("cross section quadrature did not converge");
    }
    return resonant_cross_section(lambda0) * total;
}

double mean_free_path(double density, double cross_section) {
    if (!(density > 0.0) || !(cross_section > 0.0)) throw InputError("mean free path: positive inputs required");
    return 1.0 / (density * cross_section);
}

double dipole_from_gamma(double gamma, double omega0) {
    if (!(gamma > 0.0) || !(omega0 > 0.0)) throw InputError("dipole_from_gamma: positive inputs required");
    const double c = kSpeedOfLight;
    return std::sqrt(gamma * 4.0 * std::numbers::pi * kEpsilon0 * 3.0 * kHbar * c * c * c /
                     (4.0 * omega0 * omega0 * omega0));
}

double gamma_from_dipole(double d, double omega0) {
    const double c = kSpeedOfLight;
    return 4.0 * omega0 * omega0 * omega0 * d * d / (4.0 * std::numbers::pi * kEpsilon0 * 3.0 * kHbar * c * c * c);
}

double pulse_area_from_energy(double energy, double duration, double waist, double dipole) {
    if (!(energy > 0.0) || !(duration > 0.0) || !(waist > 0.0) || !(dipole > 0.0)) {
        throw InputError("pulse area: positive inputs required");
    }
    return 2.0 * dipole * std::sqrt(duration * kSpeedOfLight * kMu0 * energy * std::sqrt(std::numbers::pi) / waist) / kHbar;
}

double mean_distance_from_density(double density) {
    if (!(density > 0.0)) throw InputError("density must be positive");
    return 0.554 * std::cbrt(1.0 / density);
}

}  // namespace mqc
