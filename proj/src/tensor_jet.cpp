#include "jetnorm/tensor_jet.hpp"

#include <algorithm>

#include "jetnorm/errors.hpp"

namespace jetnorm {

TensorJet::TensorJet(int dim, int order, int contra, int cov, Symmetry sym)
    : dim_(dim), order_(order), contra_(contra), cov_(cov), sym_(sym) {
    if (dim < 1) throw StructuralError("tensor jet: dimension must be >= 1");
    if (order < 0) throw StructuralError("tensor jet: order must be >= 0");
    if (contra < 0 || cov < 0) throw StructuralError("tensor jet: negative valence");
    if (sym == Symmetry::SymmetricCovariant && !(contra == 0 && cov == 2)) {
        throw StructuralError("tensor jet: symmetric-covariant tag needs valence (0,2)");
    }
    if (sym == Symmetry::AntisymmetricContravariant && !(contra == 2 && cov == 0)) {
        throw StructuralError("tensor jet: antisymmetric-contravariant tag needs valence (2,0)");
    }
}

void TensorJet::check_entry(const MultiIndex& a, const IndexTuple& idx) const {
    if (static_cast<int>(a.size()) != dim_) {
        throw StructuralError("tensor jet: multi-index dimension mismatch");
    }
    if (degree(a) > order_) {
        throw StructuralError("tensor jet: multi-index degree exceeds jet order");
    }
    for (int e : a) {
        if (e < 0) throw StructuralError("tensor jet: negative exponent");
    }
    if (static_cast<int>(idx.size()) != contra_ + cov_) {
        throw StructuralError("tensor jet: index tuple length mismatch");
    }
    for (int i : idx) {
        if (i < 0 || i >= dim_) throw StructuralError("tensor jet: fiber index out of range");
    }
}

std::pair<IndexTuple, int> TensorJet::canonical(const IndexTuple& idx) const {
    switch (sym_) {
        case Symmetry::None:
            return {idx, 1};
        case Symmetry::SymmetricCovariant: {
            IndexTuple c = idx;
            if (c[0] > c[1]) std::swap(c[0], c[1]);
            return {c, 1};
        }
        case Symmetry::AntisymmetricContravariant: {
            if (idx[0] == idx[1]) return {idx, 0};
            if (idx[0] < idx[1]) return {idx, 1};
            return {IndexTuple{idx[1], idx[0]}, -1};
        }
    }
    return {idx, 1};
}

Rational TensorJet::component(const MultiIndex& a, const IndexTuple& idx) const {
    check_entry(a, idx);
    auto [c, sign] = canonical(idx);
    if (sign == 0) return Rational(0);
    auto it = entries_.find({a, c});
    if (it == entries_.end()) return Rational(0);
    return sign > 0 ? it->second : Rational(-it->second);
}

void TensorJet::set_component(const MultiIndex& a, const IndexTuple& idx, const Rational& value) {
    check_entry(a, idx);
    auto [c, sign] = canonical(idx);
    if (sign == 0) {
        if (value != 0) {
            throw StructuralError("tensor jet: antisymmetric diagonal entry must be zero");
        }
        return;
    }
    const Rational v = sign > 0 ? value : Rational(-value);
    if (v == 0) {
        entries_.erase({a, c});
    } else {
        entries_[{a, c}] = v;
    }
}

void TensorJet::add_to_component(const MultiIndex& a, const IndexTuple& idx, const Rational& value) {
    if (value == 0) return;
    set_component(a, idx, component(a, idx) + value);
}

ScalarJet TensorJet::component_jet(const IndexTuple& idx) const {
    ScalarJet out(dim_, order_);
    auto [c, sign] = canonical(idx);
    if (sign == 0) return out;
    for (const auto& [key, v] : entries_) {
        if (key.second != c) continue;
        out.set_coefficient(key.first, sign > 0 ? v : Rational(-v));
    }
    return out;
}

std::vector<IndexTuple> TensorJet::all_index_tuples() const {
    const int slots = contra_ + cov_;
    std::vector<IndexTuple> out;
    IndexTuple cur(static_cast<std::size_t>(slots), 0);
    while (true) {
        out.push_back(cur);
        int pos = slots - 1;
        while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == dim_ - 1) {
            cur[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++cur[static_cast<std::size_t>(pos)];
    }
    return out;
}

TensorJet TensorJet::truncated(int new_order) const {
    TensorJet t(dim_, new_order, contra_, cov_, sym_);
    for (const auto& [key, v] : entries_) {
        if (degree(key.first) <= new_order) t.entries_.emplace(key, v);
    }
    return t;
}

TensorJet TensorJet::lifted(int new_order) const {
    if (new_order < order_) throw StructuralError("tensor jet: lift cannot lower order");
    TensorJet t(dim_, new_order, contra_, cov_, sym_);
    t.entries_ = entries_;
    return t;
}

TensorJet TensorJet::degree_slice(int n) const {
    TensorJet t(dim_, n, contra_, cov_, sym_);
    for (const auto& [key, v] : entries_) {
        if (degree(key.first) == n) t.entries_.emplace(key, v);
    }
    return t;
}

TensorJet TensorJet::operator-() const {
    TensorJet t(dim_, order_, contra_, cov_, sym_);
    for (const auto& [key, v] : entries_) t.entries_.emplace(key, -v);
    return t;
}

TensorJet& TensorJet::operator+=(const TensorJet& other) {
    if (dim_ != other.dim_ || order_ != other.order_ || contra_ != other.contra_ ||
        cov_ != other.cov_ || sym_ != other.sym_) {
        throw StructuralError("tensor jet: addition needs identical shape");
    }
    for (const auto& [key, v] : other.entries_) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            entries_.emplace(key, v);
        } else {
            it->second += v;
            if (it->second == 0) entries_.erase(it);
        }
    }
    return *this;
}

TensorJet& TensorJet::operator-=(const TensorJet& other) {
    return *this += -other;
}

TensorJet operator*(const Rational& s, const TensorJet& t) {
    TensorJet out(t.dim_, t.order_, t.contra_, t.cov_, t.sym_);
    if (s == 0) return out;
    for (const auto& [key, v] : t.entries_) out.entries_.emplace(key, s * v);
    return out;
}

bool TensorJet::operator==(const TensorJet& other) const {
    return dim_ == other.dim_ && order_ == other.order_ && contra_ == other.contra_ &&
           cov_ == other.cov_ && sym_ == other.sym_ && entries_ == other.entries_;
}

ConnectionJet::ConnectionJet(TensorJet t) : t_(std::move(t)) {
    if (t_.contra() != 1 || t_.cov() != 2 || t_.symmetry() != Symmetry::None) {
        throw StructuralError("connection jet: underlying tensor must be plain (1,2)");
    }
}

namespace {

// Shared pullback data for one action of g: the inverse map G = g^{-1}, its
// Jacobian H (transforms covariant slots), and J_g o G = H^{-1} (transforms
// contravariant slots). All entries truncated to the target order k.
struct PullbackFrame {
    int dim;
    int order;
    std::vector<ScalarJet> ginv_k;              // components of g^{-1}, order k
    std::vector<std::vector<ScalarJet>> cov;    // H[b][j] = d(ginv^b)/dx^j
    std::vector<std::vector<ScalarJet>> contra; // (J_g o ginv)[l][a]

    PullbackFrame(const DiffeoJet& g, int k, bool need_contra) : dim(g.dim()), order(k) {
        const DiffeoJet ginv = diffeo_invert(g.truncated(k + 1));
        for (const auto& c : ginv.components()) ginv_k.push_back(c.truncated(k));
        cov = ginv.jacobian(); // entries have order k already
        if (need_contra) {
            const auto jg = g.truncated(k + 1).jacobian();
            contra.resize(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) {
                    contra[static_cast<std::size_t>(i)].push_back(
                        jet_compose(jg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                    ginv_k));
                }
            }
        }
    }
};

TensorJet act_with_frame(const PullbackFrame& frame, const TensorJet& t) {
    const int m = t.dim();
    const int k = t.order();
    const int p = t.contra();
    const int q = t.cov();

    TensorJet out(m, k, p, q, t.symmetry());

    // Components of t carried to the new chart: t_idx(g^{-1}(x)).
    const auto tuples = TensorJet(m, k, p, q, Symmetry::None).all_index_tuples();
    std::map<IndexTuple, ScalarJet> carried;
    for (const auto& idx : tuples) {
        ScalarJet cj = t.component_jet(idx);
        if (cj.is_zero()) continue;
        carried.emplace(idx, jet_compose(cj, frame.ginv_k));
    }
    if (carried.empty()) return out;

    for (const auto& out_idx : tuples) {
        // Respect symmetry storage: compute canonical representatives once.
        if (t.symmetry() != Symmetry::None) {
            if (out_idx[0] > out_idx[1]) continue;
            if (t.symmetry() == Symmetry::AntisymmetricContravariant && out_idx[0] == out_idx[1]) {
                continue;
            }
        }
        ScalarJet acc(m, k);
        for (const auto& [in_idx, carried_jet] : carried) {
            ScalarJet term = carried_jet;
            for (int s = 0; s < p; ++s) {
                term = jet_multiply(
                    term, frame.contra[static_cast<std::size_t>(out_idx[static_cast<std::size_t>(s)])]
                                      [static_cast<std::size_t>(in_idx[static_cast<std::size_t>(s)])]);
            }
            for (int s = p; s < p + q; ++s) {
                term = jet_multiply(
                    term, frame.cov[static_cast<std::size_t>(in_idx[static_cast<std::size_t>(s)])]
                                   [static_cast<std::size_t>(out_idx[static_cast<std::size_t>(s)])]);
            }
            acc += term;
        }
        for (const auto& [a, c] : acc.coefficients()) {
            out.set_component(a, out_idx, c);
        }
    }
    return out;
}

} // namespace

TensorJet act_on_tensor_jet(const DiffeoJet& g, const TensorJet& t) {
    if (g.dim() != t.dim()) throw StructuralError("tensor action: dimension mismatch");
    if (g.order() < t.order() + 1) {
        throw DomainError("tensor action: group jet order must exceed tensor order by 1");
    }
    PullbackFrame frame(g, t.order(), t.contra() > 0);
    return act_with_frame(frame, t);
}

ConnectionJet act_on_connection_jet(const DiffeoJet& g, const ConnectionJet& theta) {
    if (g.dim() != theta.dim()) throw StructuralError("connection action: dimension mismatch");
    const int k = theta.order();
    const int m = theta.dim();
    if (g.order() < k + 2) {
        throw DomainError("connection action: group jet order must exceed connection order by 2");
    }

    // Tensorial part at order k via the (k+1)-frame.
    TensorJet tensor_part = act_on_tensor_jet(g.truncated(k + 1), theta.coefficients());

    // Inhomogeneity: Hinv^l_a d(H^a_j)/dx^i with H the Jacobian of g^{-1},
    // computed from the full (k+2)-jet of g.
    const DiffeoJet ginv = diffeo_invert(g.truncated(k + 2));
    std::vector<ScalarJet> ginv_k;
    for (const auto& c : ginv.components()) ginv_k.push_back(c.truncated(k));
    const auto h = ginv.jacobian(); // order k+1
    std::vector<std::vector<ScalarJet>> hinv(static_cast<std::size_t>(m));
    {
        const auto jg = g.truncated(k + 2).jacobian();
        for (int l = 0; l < m; ++l) {
            for (int a = 0; a < m; ++a) {
                hinv[static_cast<std::size_t>(l)].push_back(
                    jet_compose(jg[static_cast<std::size_t>(l)][static_cast<std::size_t>(a)]
                                    .truncated(k),
                                ginv_k));
            }
        }
    }
    TensorJet inhom(m, k, 1, 2, Symmetry::None);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                ScalarJet acc(m, k);
                for (int a = 0; a < m; ++a) {
                    const ScalarJet dh =
                        h[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)].partial(i);
                    acc += jet_multiply(hinv[static_cast<std::size_t>(l)][static_cast<std::size_t>(a)],
                                        dh.truncated(k));
                }
                for (const auto& [mi, c] : acc.coefficients()) {
                    inhom.add_to_component(mi, IndexTuple{l, i, j}, c);
                }
            }
        }
    }
    return ConnectionJet(tensor_part + inhom);
}

TensorJet eval_at_zero(const TensorJet& t) {
    return t.degree_slice(0);
}

} // namespace jetnorm
