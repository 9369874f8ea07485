#include "covml/representation.hpp"

#include "covml/errors.hpp"

#include <cmath>
#include <sstream>

namespace covml {

namespace {

void check_hermitian(const Matrix& g, const char* what) {
    if ((g - g.adjoint()).norm() > 1e-12 * std::max(1.0, g.norm())) {
        std::ostringstream os;
        os << what << ": generator is not Hermitian within 1e-12";
        throw validation_error(os.str());
    }
}

// residual of A ≈ ω B over unimodular ω; ω fixed to 1 when not projective
double phase_residual(const Matrix& a, const Matrix& b, bool projective) {
    if (!projective) return (a - b).norm();
    cd t = (b.adjoint() * a).trace();
    double d = 2.0 * static_cast<double>(a.rows()) - 2.0 * std::abs(t);
    return std::sqrt(std::max(0.0, d));
}

} // namespace

Representation Representation::finite(GroupSpec spec, std::vector<Matrix> matrices,
                                      bool projective) {
    const Eigen::Index d = matrices.empty() ? 0 : matrices[0].rows();
    for (int g = 0; g < static_cast<int>(matrices.size()); ++g) {
        double defect = unitarity_defect(matrices[static_cast<std::size_t>(g)]);
        if (defect > 1e-10 * static_cast<double>(d)) {
            std::ostringstream os;
            os << "matrices: element " << g << " is not unitary (defect " << defect << ")";
            throw validation_error(os.str());
        }
    }
    return finite_unchecked(std::move(spec), std::move(matrices), projective);
}

Representation Representation::finite_unchecked(GroupSpec spec, std::vector<Matrix> matrices,
                                                bool projective) {
    spec.validate();
    if (spec.kind != GroupKind::Finite)
        throw validation_error("finite representation requires a finite group");
    if (static_cast<int>(matrices.size()) != spec.order)
        throw validation_error("matrices: need exactly one matrix per group element");
    const Eigen::Index d = matrices.empty() ? 0 : matrices[0].rows();
    if (d < 1) throw validation_error("matrices: dimension must be positive");
    for (int g = 0; g < spec.order; ++g) {
        if (matrices[g].rows() != d || matrices[g].cols() != d) {
            std::ostringstream os;
            os << "matrices: element " << g << " has inconsistent dimensions";
            throw validation_error(os.str());
        }
    }
    Representation r;
    r.node_ = Node::FiniteLeaf;
    r.spec_ = std::move(spec);
    r.dim_ = static_cast<int>(d);
    r.projective_ = projective;
    r.matrices_ = std::move(matrices);
    return r;
}

Representation Representation::lie(GroupSpec spec, std::vector<Matrix> generators,
                                   bool projective) {
    spec.validate();
    std::size_t expected = 0;
    if (spec.kind == GroupKind::U1) expected = 1;
    else if (spec.kind == GroupKind::SU2) expected = 3;
    else throw validation_error("lie representation requires a u1 or su2 group");
    if (generators.size() != expected) {
        std::ostringstream os;
        os << "generators: " << to_string(spec.kind) << " needs " << expected
           << " generator(s), got " << generators.size();
        throw validation_error(os.str());
    }
    const Eigen::Index d = generators[0].rows();
    if (d < 1) throw validation_error("generators: dimension must be positive");
    for (const auto& g : generators) {
        if (g.rows() != d || g.cols() != d)
            throw validation_error("generators: inconsistent dimensions");
        check_hermitian(g, "generators");
    }
    Representation r;
    r.node_ = Node::LieLeaf;
    r.spec_ = std::move(spec);
    r.dim_ = static_cast<int>(d);
    r.projective_ = projective;
    r.generators_ = std::move(generators);
    return r;
}

Representation Representation::trivial(GroupSpec spec, int dim) {
    spec.validate();
    if (dim < 1) throw validation_error("trivial: dimension must be positive");
    switch (spec.kind) {
        case GroupKind::Finite: {
            std::vector<Matrix> mats(static_cast<std::size_t>(spec.order),
                                     Matrix::Identity(dim, dim));
            return finite(std::move(spec), std::move(mats));
        }
        case GroupKind::U1:
            return lie(std::move(spec), {Matrix::Zero(dim, dim)});
        case GroupKind::SU2:
            return lie(std::move(spec), {Matrix::Zero(dim, dim), Matrix::Zero(dim, dim),
                                         Matrix::Zero(dim, dim)});
        case GroupKind::Product: {
            std::vector<Representation> comps;
            comps.push_back(trivial(spec.components[0], dim));
            for (std::size_t i = 1; i < spec.components.size(); ++i)
                comps.push_back(trivial(spec.components[i], 1));
            return outer_tensor(std::move(spec), std::move(comps));
        }
    }
    throw error("unreachable");
}

void Representation::check_same_group(const Representation& a, const Representation& b,
                                      const char* op) {
    if (!a.spec_.same_structure(b.spec_)) {
        std::ostringstream os;
        os << op << ": representations act for different groups";
        throw validation_error(os.str());
    }
}

Representation Representation::tensor(const Representation& a, const Representation& b) {
    check_same_group(a, b, "tensor");
    Representation r;
    r.node_ = Node::Tensor;
    r.spec_ = a.spec_;
    r.dim_ = a.dim_ * b.dim_;
    r.projective_ = a.projective_ || b.projective_;
    r.children_ = {std::make_shared<Representation>(a), std::make_shared<Representation>(b)};
    return r;
}

Representation Representation::direct_sum(const Representation& a, const Representation& b) {
    check_same_group(a, b, "direct_sum");
    Representation r;
    r.node_ = Node::DirectSum;
    r.spec_ = a.spec_;
    r.dim_ = a.dim_ + b.dim_;
    r.projective_ = a.projective_ || b.projective_;
    r.children_ = {std::make_shared<Representation>(a), std::make_shared<Representation>(b)};
    return r;
}

Representation Representation::conjugate(const Representation& a) {
    Representation r;
    r.node_ = Node::Conjugate;
    r.spec_ = a.spec_;
    r.dim_ = a.dim_;
    r.projective_ = a.projective_;
    r.children_ = {std::make_shared<Representation>(a)};
    return r;
}

Representation Representation::outer_tensor(GroupSpec product_spec,
                                            std::vector<Representation> components) {
    product_spec.validate();
    if (product_spec.kind != GroupKind::Product)
        throw validation_error("outer_tensor: group is not a product");
    if (components.size() != product_spec.components.size())
        throw validation_error("outer_tensor: component count mismatch");
    Representation r;
    r.node_ = Node::OuterTensor;
    r.dim_ = 1;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!components[i].spec().same_structure(product_spec.components[i]))
            throw validation_error("outer_tensor: component group mismatch");
        r.dim_ *= components[i].dim();
        r.projective_ = r.projective_ || components[i].projective();
        r.children_.push_back(std::make_shared<Representation>(std::move(components[i])));
    }
    r.spec_ = std::move(product_spec);
    return r;
}

Representation Representation::outer_direct_sum(GroupSpec product_spec,
                                                std::vector<Representation> components) {
    product_spec.validate();
    if (product_spec.kind != GroupKind::Product)
        throw validation_error("outer_direct_sum: group is not a product");
    if (components.size() != product_spec.components.size())
        throw validation_error("outer_direct_sum: component count mismatch");
    Representation r;
    r.node_ = Node::OuterDirectSum;
    r.dim_ = 0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!components[i].spec().same_structure(product_spec.components[i]))
            throw validation_error("outer_direct_sum: component group mismatch");
        r.dim_ += components[i].dim();
        r.projective_ = r.projective_ || components[i].projective();
        r.children_.push_back(std::make_shared<Representation>(std::move(components[i])));
    }
    r.spec_ = std::move(product_spec);
    return r;
}

Matrix Representation::evaluate(const GroupElement& g) const {
    if (!g.matches(spec_))
        throw validation_error("evaluate: element kind does not match the group");
    switch (node_) {
        case Node::FiniteLeaf:
            return matrices_[static_cast<std::size_t>(g.as_index())];
        case Node::LieLeaf: {
            if (spec_.kind == GroupKind::U1)
                return unitary_exp(generators_[0], -g.as_angle());  // exp(i theta G)
            const Quaternion& q = g.as_quaternion();
            double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
            double theta = 2.0 * std::atan2(vn, q.w);
            if (vn < 1e-300) {
                // q = ±1: any axis gives the same exponential
                return unitary_exp(generators_[2], theta);
            }
            Matrix h = (q.x / vn) * generators_[0] + (q.y / vn) * generators_[1] +
                       (q.z / vn) * generators_[2];
            return unitary_exp(h, theta);  // exp(-i theta n.J)
        }
        case Node::Tensor:
            return kron(children_[0]->evaluate(g), children_[1]->evaluate(g));
        case Node::DirectSum: {
            Matrix out = Matrix::Zero(dim_, dim_);
            Matrix a = children_[0]->evaluate(g);
            Matrix b = children_[1]->evaluate(g);
            out.topLeftCorner(a.rows(), a.cols()) = a;
            out.bottomRightCorner(b.rows(), b.cols()) = b;
            return out;
        }
        case Node::Conjugate:
            return children_[0]->evaluate(g).conjugate();
        case Node::OuterTensor: {
            Matrix out = children_[0]->evaluate(g.as_tuple()[0]);
            for (std::size_t i = 1; i < children_.size(); ++i)
                out = kron(out, children_[i]->evaluate(g.as_tuple()[i]));
            return out;
        }
        case Node::OuterDirectSum: {
            Matrix out = Matrix::Zero(dim_, dim_);
            Eigen::Index at = 0;
            for (std::size_t i = 0; i < children_.size(); ++i) {
                Matrix b = children_[i]->evaluate(g.as_tuple()[i]);
                out.block(at, at, b.rows(), b.cols()) = b;
                at += b.rows();
            }
            return out;
        }
    }
    throw error("unreachable");
}

namespace {

void collect_constraint_elements(const GroupSpec& spec, std::vector<GroupElement>& out) {
    switch (spec.kind) {
        case GroupKind::Finite:
            for (int g = 0; g < spec.order; ++g) out.push_back(GroupElement::index(g));
            break;
        case GroupKind::U1:
            out.push_back(GroupElement::angle(1.0));
            out.push_back(GroupElement::angle(std::sqrt(2.0)));
            break;
        case GroupKind::SU2:
            for (int axis = 0; axis < 3; ++axis) {
                for (double theta : {1.0, std::sqrt(2.0)}) {
                    double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
                    Quaternion q{c, axis == 0 ? s : 0.0, axis == 1 ? s : 0.0,
                                 axis == 2 ? s : 0.0};
                    out.push_back(GroupElement::quaternion(q));
                }
            }
            break;
        case GroupKind::Product: {
            for (std::size_t i = 0; i < spec.components.size(); ++i) {
                std::vector<GroupElement> part;
                collect_constraint_elements(spec.components[i], part);
                for (auto& p : part) {
                    std::vector<GroupElement> tuple;
                    for (std::size_t j = 0; j < spec.components.size(); ++j)
                        tuple.push_back(j == i ? p : spec.components[j].identity());
                    out.push_back(GroupElement::tuple(std::move(tuple)));
                }
            }
            break;
        }
    }
}

} // namespace

std::vector<GroupElement> Representation::constraint_elements() const {
    std::vector<GroupElement> out;
    collect_constraint_elements(spec_, out);
    return out;
}

VerificationReport verify_representation(const Representation& rep, HaarSampler& sampler) {
    VerificationReport report;
    report.worst_g = rep.spec().identity();
    report.worst_h = rep.spec().identity();

    auto check_pair = [&](const GroupElement& g, const GroupElement& h) {
        Matrix ug = rep.evaluate(g);
        Matrix uh = rep.evaluate(h);
        Matrix ugh = rep.evaluate(rep.spec().compose(g, h));
        double r = phase_residual(ug * uh, ugh, rep.projective());
        if (r > report.max_residual) {
            report.max_residual = r;
            report.worst_g = g;
            report.worst_h = h;
        }
        report.max_unitarity_defect =
            std::max({report.max_unitarity_defect, unitarity_defect(ug), unitarity_defect(uh)});
        ++report.pairs_checked;
        // the multiplier in U(g)U(h) = ω U(gh), recorded without canonicalization
        cd t = (ugh.adjoint() * (ug * uh)).trace();
        return std::abs(t) > 0.0 ? t / std::abs(t) : cd(0.0);
    };

    if (rep.spec().is_finite()) {
        const int order = rep.spec().order;
        if (rep.projective())
            report.cocycle.assign(static_cast<std::size_t>(order),
                                  std::vector<cd>(static_cast<std::size_t>(order)));
        for (int g = 0; g < order; ++g)
            for (int h = 0; h < order; ++h) {
                cd omega = check_pair(GroupElement::index(g), GroupElement::index(h));
                if (rep.projective())
                    report.cocycle[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] =
                        omega;
            }
    } else {
        for (int k = 0; k < 100; ++k) check_pair(sampler.next(), sampler.next());
    }

    if (report.max_residual > 1e-8) {
        std::ostringstream os;
        os << "representation invalid: homomorphism residual " << report.max_residual
           << " at pair g=" << report.worst_g.describe() << ", h=" << report.worst_h.describe();
        throw validation_error(os.str());
    }
    return report;
}

} // namespace covml
