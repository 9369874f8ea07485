#pragma once

#include "covml/group.hpp"
#include "covml/haar.hpp"
#include "covml/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace covml {

/// A unitary (or projective) representation of a GroupSpec.
///
/// Leaves hold either one matrix per element (finite groups) or Hermitian
/// generators (Lie kinds: one for U(1), three for SU(2)), with the evaluator
/// exponentiating the parametrized generator combination. Composite nodes
/// tensor or direct-sum representations of the same group, conjugate a
/// representation entrywise, or combine component representations over a
/// product group.
class Representation {
public:
    /// Finite leaf: matrices[g] is the unitary for element index g.
    static Representation finite(GroupSpec spec, std::vector<Matrix> matrices,
                                 bool projective = false);
    /// Same, but without the unitarity gate. For building deliberately broken
    /// evaluators that verify_representation / verify_covariance must catch.
    static Representation finite_unchecked(GroupSpec spec, std::vector<Matrix> matrices,
                                           bool projective = false);
    /// Lie leaf. U(1): one generator G, theta evaluates to exp(i theta G).
    /// SU(2): generators {Jx, Jy, Jz}, a unit quaternion with rotation angle
    /// theta about axis n evaluates to exp(-i theta n.J).
    static Representation lie(GroupSpec spec, std::vector<Matrix> generators,
                              bool projective = false);
    /// Trivial representation of any group on C^dim.
    static Representation trivial(GroupSpec spec, int dim);
    /// g -> a(g) ⊗ b(g); a and b must represent the same group.
    static Representation tensor(const Representation& a, const Representation& b);
    /// g -> a(g) ⊕ b(g).
    static Representation direct_sum(const Representation& a, const Representation& b);
    /// g -> conj(a(g)), entrywise in the stored basis.
    static Representation conjugate(const Representation& a);
    /// (g1,..,gn) -> r1(g1) ⊗ .. ⊗ rn(gn) over a product group.
    static Representation outer_tensor(GroupSpec product_spec,
                                       std::vector<Representation> components);
    /// (g1,..,gn) -> r1(g1) ⊕ .. ⊕ rn(gn) over a product group.
    static Representation outer_direct_sum(GroupSpec product_spec,
                                           std::vector<Representation> components);

    int dim() const { return dim_; }
    bool projective() const { return projective_; }
    const GroupSpec& spec() const { return spec_; }

    Matrix evaluate(const GroupElement& g) const;

    /// Unitaries whose joint commutant equals the commutant of the whole
    /// representation: all elements for finite groups; for Lie kinds each
    /// stored generator direction exponentiated at parameters 1 and sqrt(2)
    /// (the irrational ratio makes the generated subgroup dense in each
    /// one-parameter subgroup); products take the union of lifted component
    /// sets.
    std::vector<GroupElement> constraint_elements() const;

    /// Leaf accessors (empty for composite nodes).
    const std::vector<Matrix>& leaf_matrices() const { return matrices_; }
    const std::vector<Matrix>& leaf_generators() const { return generators_; }

private:
    enum class Node { FiniteLeaf, LieLeaf, Tensor, DirectSum, Conjugate, OuterTensor, OuterDirectSum };

    Representation() = default;
    static void check_same_group(const Representation& a, const Representation& b,
                                 const char* op);

    Node node_ = Node::FiniteLeaf;
    GroupSpec spec_;
    int dim_ = 0;
    bool projective_ = false;
    std::vector<Matrix> matrices_;    // finite leaf
    std::vector<Matrix> generators_;  // lie leaf
    std::vector<std::shared_ptr<const Representation>> children_;
};

/// Result of a homomorphism check: the largest pairwise residual
/// min_phase ‖U(g)U(h) − ω U(gh)‖_F (ω free only for projective
/// representations) and the pair attaining it. For finite projective
/// representations the multiplier table ω(g,h) is recorded as found; no
/// canonical gauge is imposed on it.
struct VerificationReport {
    double max_residual = 0.0;
    GroupElement worst_g;
    GroupElement worst_h;
    double max_unitarity_defect = 0.0;
    int pairs_checked = 0;
    std::vector<std::vector<cd>> cocycle;  // finite projective only
};

/// Exhaustive pairwise homomorphism check for finite groups; 100 sampled
/// pairs composed through the group for Lie kinds. Throws validation_error
/// when the residual exceeds 1e-8, carrying the worst pair.
VerificationReport verify_representation(const Representation& rep, HaarSampler& sampler);

} // namespace covml
