#include "mqc/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace mqc {

TensorTag::TensorTag(std::vector<TensorFactor> factors) : factors_(std::move(factors)) {
    if (degree() > kMaxTensorDegree) throw MisuseError("tensor tag degree above 2");
    std::sort(factors_.begin(), factors_.end());
}

TensorTag TensorTag::times(const TensorFactor& f) const {
    if (degree() >= kMaxTensorDegree) throw MisuseError("tensor tag degree overflow");
    auto v = factors_;
    v.push_back(f);
    return TensorTag(std::move(v));
}

bool TensorTag::is_mixed() const {
    return degree() == 2 && factors_[0].conjugate != factors_[1].conjugate;
}

cplx TensorTag::evaluate(const Eigen::Matrix3cd& t) const {
    cplx r = 1.0;
    for (const auto& f : factors_) {
        const cplx v = slot_value(t, f.slot);
        r *= f.conjugate ? std::conj(v) : v;
    }
    return r;
}

void PhaseTaggedVector::add(const PhaseMonomial& m, const CoefficientVector& v) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, v);
    } else {
        it->second += v;
    }
}

CoefficientVector PhaseTaggedVector::evaluate(const Eigen::Matrix3cd& t) const {
    return evaluate(t, {0.0, 0.0, 0.0, 0.0});
}

CoefficientVector PhaseTaggedVector::evaluate(const Eigen::Matrix3cd& t,
                                              const std::array<double, 4>& phases) const {
    CoefficientVector out = CoefficientVector::Zero(kPairDim);
    for (const auto& [m, v] : terms_) {
        double arg = 0.0;
        for (int i = 0; i < 4; ++i) arg += m.exponents[static_cast<std::size_t>(i)] * phases[static_cast<std::size_t>(i)];
        out += std::exp(kI * arg) * m.tag.evaluate(t) * v;
    }
    return out;
}

std::shared_ptr<const TwoAtomBasis> shared_basis() {
    static const auto b = std::make_shared<const TwoAtomBasis>(build_single_atom_basis());
    return b;
}

ScatteringModel::ScatteringModel(double area, PolarizationChannel channel, double gamma,
                                 InteractionPart part, bool gamma_zero)
    : ScatteringModel(area, channel, gamma, shared_basis(), [&] {
          auto d = std::make_shared<InteractionDecomposition>(*shared_basis(), part);
          if (gamma_zero) *d = d->without_collective_decay();
          return std::shared_ptr<const InteractionDecomposition>(d);
      }()) {}

ScatteringModel::ScatteringModel(double area, PolarizationChannel channel, double gamma,
                                 std::shared_ptr<const TwoAtomBasis> basis,
                                 std::shared_ptr<const InteractionDecomposition> interaction)
    : area_(area),
      channel_(channel),
      gamma_(gamma),
      basis_(std::move(basis)),
      interaction_(std::move(interaction)),
      decay_(std::make_shared<PairDecay>(gamma, basis_->single())),
      kick1_(PulseSpec{area, Polarization::x, 1}, basis_->single()),
      kick2_(PulseSpec{area, channel == PolarizationChannel::parallel ? Polarization::x : Polarization::y, 2},
             basis_->single()) {}

const KickDecomposition& ScatteringModel::kick(int pulse) const {
    if (pulse == 1) return kick1_;
    if (pulse == 2) return kick2_;
    throw InputError("pulse index must be 1 or 2");
}

Superop ScatteringModel::pair_kick(int pulse, int p, int q) const {
    return kron(kick(pulse).harmonic(p), kick(pulse).harmonic(q));
}

PhaseTaggedVector initial_vector(const TwoAtomBasis& basis) {
    Op16 ground = Op16::Zero();
    ground(0, 0) = 1.0;
    PhaseTaggedVector out;
    out.add(PhaseMonomial{}, basis.expand(ground));
    return out;
}

namespace {

// (A (x) B) v with v viewed as a 16x16 array v(16 i + j)
CoefficientVector apply_product(const Superop16& a, const Superop16& b, const CoefficientVector& v) {
    Eigen::Map<const Eigen::Matrix<cplx, 16, 16, Eigen::RowMajor>> m(v.data());
    Eigen::Matrix<cplx, 16, 16, Eigen::RowMajor> r = a * m * b.transpose();
    return Eigen::Map<const CoefficientVector>(r.data(), kPairDim);
}

bool negligible(const CoefficientVector& v, double ref) {
    const double m = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    return m == 0.0 || m <= 1e-15 * ref;
}

}  // namespace

PhaseTaggedVector apply_kick(const PhaseTaggedVector& state, int pulse, const ScatteringModel& model,
                             const ExpansionOptions& options) {
    if (pulse != 1 && pulse != 2) throw InputError("apply_kick: pulse must be 1 or 2");
    const KickDecomposition& k = model.kick(pulse);
    const int ia = pulse == 1 ? 0 : 1;
    const int ib = pulse == 1 ? 2 : 3;
    PhaseTaggedVector out;
    for (const auto& [m, v] : state.terms()) {
        const double ref = v.cwiseAbs().maxCoeff();
        for (int p = -2; p <= 2; ++p) {
            for (int q = -2; q <= 2; ++q) {
                if (pulse == 1 && options.target_order && p + q != -*options.target_order) continue;
                if (pulse == 2 && options.prune_position_phases &&
                    (p != -m.exponents[0] || q != -m.exponents[2])) {
                    continue;
                }
                CoefficientVector w = apply_product(k.harmonic(p), k.harmonic(q), v);
                if (negligible(w, ref)) continue;
                PhaseMonomial n = m;
                n.exponents[static_cast<std::size_t>(ia)] += p;
                n.exponents[static_cast<std::size_t>(ib)] += q;
                out.add(n, w);
            }
        }
    }
    return out;
}

PhaseTaggedVector apply_resolvent(const PhaseTaggedVector& state, const PairDecay& decay, cplx z,
                                  SectorPolicy policy) {
    PhaseTaggedVector out;
    for (const auto& [m, v] : state.terms()) out.add(m, decay.apply_resolvent(v, z, policy));
    return out;
}

PhaseTaggedVector apply_interaction(const PhaseTaggedVector& state, const InteractionDecomposition& v) {
    PhaseTaggedVector out;
    for (const auto& [m, u] : state.terms()) {
        if (m.tag.degree() >= kMaxTensorDegree) {
            throw MisuseError("apply_interaction: tensor degree would exceed 2");
        }
        const double ref = u.cwiseAbs().maxCoeff();
        for (int s = 0; s < kTensorSlots; ++s) {
            for (bool conj : {false, true}) {
                CoefficientVector w = v.coefficient(s, conj) * u;
                if (negligible(w, ref)) continue;
                PhaseMonomial n = m;
                n.tag = m.tag.times({s, conj});
                out.add(n, w);
            }
        }
    }
    return out;
}

PhaseTaggedVector apply_interaction(const PhaseTaggedVector& state, const Superop& v) {
    PhaseTaggedVector out;
    for (const auto& [m, u] : state.terms()) out.add(m, v * u);
    return out;
}

namespace {

template <class Interact>
PhaseTaggedVector solve(int order, cplx z1, cplx z2, const ScatteringModel& model,
                        const ExpansionOptions& options, Interact&& interact) {
    if (order < 0 || order > 2) throw InputError("scattering_solution: order must be 0, 1 or 2");
    if (z1.real() < 0.0 || z2.real() < 0.0) throw InputError("scattering_solution: Re z must be >= 0");
    const auto policy = [](cplx z) {
        return z == 0.0 ? SectorPolicy::excise_stationary : SectorPolicy::full;
    };
    const PhaseTaggedVector kicked = apply_kick(initial_vector(model.basis()), 1, model, options);
    PhaseTaggedVector total;
    const int pmax = options.interaction_during_delay ? order : 0;
    for (int p = 0; p <= pmax; ++p) {
        PhaseTaggedVector u = apply_resolvent(kicked, model.decay(), z1, policy(z1));
        for (int i = 0; i < p; ++i) u = apply_resolvent(interact(u), model.decay(), z1, policy(z1));
        u = apply_kick(u, 2, model, options);
        u = apply_resolvent(u, model.decay(), z2, policy(z2));
        for (int i = 0; i < order - p; ++i) u = apply_resolvent(interact(u), model.decay(), z2, policy(z2));
        for (const auto& [m, v] : u.terms()) total.add(m, v);
    }
    return total;
}

}  // namespace

PhaseTaggedVector scattering_solution(int order, cplx z1, cplx z2, const ScatteringModel& model,
                                      const ExpansionOptions& options) {
    return solve(order, z1, z2, model, options,
                 [&](const PhaseTaggedVector& u) { return apply_interaction(u, model.interaction()); });
}

PhaseTaggedVector scattering_solution_fixed(int order, cplx z1, cplx z2, const ScatteringModel& model,
                                            const Superop& v, const ExpansionOptions& options) {
    return solve(order, z1, z2, model, options,
                 [&](const PhaseTaggedVector& u) { return apply_interaction(u, v); });
}

}  // namespace mqc
