#pragma once

#include "mqc/dipole_coupling.hpp"
#include "mqc/single_atom.hpp"

#include <array>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace mqc {

struct TensorFactor {
    int slot = 0;
    bool conjugate = false;
    auto operator<=>(const TensorFactor&) const = default;
};

// formal product of at most two tensor entries, factors kept sorted
class TensorTag {
public:
    TensorTag() = default;
    explicit TensorTag(std::vector<TensorFactor> factors);

    int degree() const { return static_cast<int>(factors_.size()); }
    const std::vector<TensorFactor>& factors() const { return factors_; }
    TensorTag times(const TensorFactor& f) const;
    // T T* type (one plain, one conjugated factor)
    bool is_mixed() const;
    cplx evaluate(const Eigen::Matrix3cd& t) const;

    auto operator<=>(const TensorTag&) const = default;

private:
    std::vector<TensorFactor> factors_;
};

inline constexpr int kMaxTensorDegree = 2;

// e^{i (a phi11 + b phi21 + c phi12 + d phi22)}, phi_{pulse,atom}
struct PhaseMonomial {
    std::array<int, 4> exponents{0, 0, 0, 0};
    TensorTag tag;

    int modulation_order() const { return exponents[1] + exponents[3]; }
    bool position_phases_cancel() const {
        return exponents[0] + exponents[1] == 0 && exponents[2] + exponents[3] == 0;
    }
    auto operator<=>(const PhaseMonomial&) const = default;
};

class PhaseTaggedVector {
public:
    using Map = std::map<PhaseMonomial, CoefficientVector>;

    void add(const PhaseMonomial& m, const CoefficientVector& v);
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    // sum over all monomials with every phase set to zero and tags evaluated at t
    CoefficientVector evaluate(const Eigen::Matrix3cd& t) const;
    // same with phases given as (phi11, phi21, phi12, phi22)
    CoefficientVector evaluate(const Eigen::Matrix3cd& t, const std::array<double, 4>& phases) const;

private:
    Map terms_;
};

struct ExpansionOptions {
    bool interaction_during_delay = true;   // full p-sum; false keeps p = 0 only
    std::optional<int> target_order;        // keep pulse-1 harmonics with a + c = -kappa
    bool prune_position_phases = false;     // pulse 2 only emits harmonics cancelling pulse 1's
};

// immutable ingredients shared by all evaluations
class ScatteringModel {
public:
    ScatteringModel(double area, PolarizationChannel channel, double gamma = 1.0,
                    InteractionPart part = InteractionPart::full, bool gamma_zero = false);
    ScatteringModel(double area, PolarizationChannel channel, double gamma,
                    std::shared_ptr<const TwoAtomBasis> basis,
                    std::shared_ptr<const InteractionDecomposition> interaction);

    const TwoAtomBasis& basis() const { return *basis_; }
    const PairDecay& decay() const { return *decay_; }
    const InteractionDecomposition& interaction() const { return *interaction_; }
    const KickDecomposition& kick(int pulse) const;
    double area() const { return area_; }
    double gamma() const { return gamma_; }
    PolarizationChannel channel() const { return channel_; }

    // pair kick harmonic R[p] (x) R[q] in state form
    Superop pair_kick(int pulse, int p, int q) const;

private:
    double area_;
    PolarizationChannel channel_;
    double gamma_;
    std::shared_ptr<const TwoAtomBasis> basis_;
    std::shared_ptr<const InteractionDecomposition> interaction_;
    std::shared_ptr<const PairDecay> decay_;
    KickDecomposition kick1_;
    KickDecomposition kick2_;
};

std::shared_ptr<const TwoAtomBasis> shared_basis();

PhaseTaggedVector initial_vector(const TwoAtomBasis& basis);

PhaseTaggedVector apply_kick(const PhaseTaggedVector& state, int pulse, const ScatteringModel& model,
                             const ExpansionOptions& options = {});
PhaseTaggedVector apply_resolvent(const PhaseTaggedVector& state, const PairDecay& decay, cplx z,
                                  SectorPolicy policy = SectorPolicy::full);
PhaseTaggedVector apply_interaction(const PhaseTaggedVector& state, const InteractionDecomposition& v);
// fixed configuration: numeric state-form V, tags untouched
PhaseTaggedVector apply_interaction(const PhaseTaggedVector& state, const Superop& v);

// Laplace-domain solution of order n in the interaction (n = 0 or 2).
// z = 0 is evaluated with the stationary sector excised (and checked empty).
PhaseTaggedVector scattering_solution(int order, cplx z1, cplx z2, const ScatteringModel& model,
                                      const ExpansionOptions& options = {});

// same with a numeric interaction (fixed configuration)
PhaseTaggedVector scattering_solution_fixed(int order, cplx z1, cplx z2, const ScatteringModel& model,
                                            const Superop& v, const ExpansionOptions& options = {});

}  // namespace mqc
