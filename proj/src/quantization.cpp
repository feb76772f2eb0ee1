#include "jetnorm/quantization.hpp"

#include <algorithm>

#include "jetnorm/errors.hpp"

namespace jetnorm {

void require_poisson_jet(const TensorJet& w) {
    if (w.contra() != 2 || w.cov() != 0 || w.symmetry() != Symmetry::AntisymmetricContravariant) {
        throw StructuralError("poisson jet: valence must be (2,0) antisymmetric");
    }
}

void check_jacobi(const TensorJet& w) {
    require_poisson_jet(w);
    if (w.order() == 0) return; // derivatives of w are invisible at order 0
    const int m = w.dim();
    const int k = w.order() - 1;
    std::vector<std::vector<ScalarJet>> comp(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            comp[static_cast<std::size_t>(i)].push_back(w.component_jet(IndexTuple{i, j}));
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            for (int kk = j + 1; kk < m; ++kk) {
                ScalarJet acc(m, k);
                for (int l = 0; l < m; ++l) {
                    acc += jet_multiply(comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)].truncated(k),
                                        comp[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk)].partial(l));
                    acc += jet_multiply(comp[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)].truncated(k),
                                        comp[static_cast<std::size_t>(kk)][static_cast<std::size_t>(i)].partial(l));
                    acc += jet_multiply(comp[static_cast<std::size_t>(kk)][static_cast<std::size_t>(l)].truncated(k),
                                        comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(l));
                }
                if (!acc.is_zero()) {
                    throw DomainError("poisson jet: Jacobi identity fails through the jet order");
                }
            }
        }
    }
}

ScalarJet poisson_bracket(const TensorJet& w, const ScalarJet& f, const ScalarJet& g) {
    require_poisson_jet(w);
    if (w.dim() != f.dim() || f.dim() != g.dim()) {
        throw StructuralError("poisson bracket: dimension mismatch");
    }
    if (f.order() < 1 || g.order() < 1) {
        throw StructuralError("poisson bracket: jets must have order >= 1");
    }
    const int m = f.dim();
    const int k = std::min(f.order(), g.order()) - 1;
    ScalarJet out(m, k);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            // jets are polynomials here; a low-order poisson jet enters with
            // its exact polynomial coefficients
            const ScalarJet wij_raw = w.component_jet(IndexTuple{i, j});
            const ScalarJet wij =
                wij_raw.order() >= k ? wij_raw.truncated(k) : wij_raw.lifted(k);
            if (wij.is_zero()) continue;
            out += jet_multiply(wij, jet_multiply(f.partial(i).truncated(k),
                                                  g.partial(j).truncated(k)));
        }
    }
    return out;
}

namespace {

void require_antisymmetric_constant(const MatrixQ& w0) {
    if (w0.rows() != w0.cols()) throw StructuralError("moyal: poisson matrix must be square");
    for (int i = 0; i < w0.rows(); ++i) {
        for (int j = 0; j <= i; ++j) {
            if (w0.at(i, j) != -w0.at(j, i)) {
                throw StructuralError("moyal: poisson matrix must be antisymmetric");
            }
        }
    }
}

void require_hbar_order(int n) {
    if (n < 0) throw StructuralError("hbar order must be >= 0");
    if (n > kMaxHbarOrder) {
        throw DomainError("hbar order exceeds the hard cap of 4");
    }
}

// d^a f for |a| = r, memoized per jet.
class PartialTable {
public:
    explicit PartialTable(const ScalarJet& f) : base_(f) {}

    const ScalarJet& get(const MultiIndex& a) {
        auto it = table_.find(a);
        if (it != table_.end()) return it->second;
        if (degree(a) == 0) return table_.emplace(a, base_).first->second;
        int first = 0;
        while (a[static_cast<std::size_t>(first)] == 0) ++first;
        MultiIndex prev = a;
        --prev[static_cast<std::size_t>(first)];
        ScalarJet value = get(prev).partial(first);
        return table_.emplace(a, std::move(value)).first->second;
    }

private:
    ScalarJet base_;
    std::map<MultiIndex, ScalarJet, GradedLexLess> table_;
};

// One hbar coefficient of the constant-matrix star product; no order
// precondition (callers guarantee enough derivatives exist).
ScalarJet moyal_coefficient(const MatrixQ& w0, PartialTable& f, PartialTable& g, int m, int r,
                            int out_order) {
    if (r == 0) {
        return jet_multiply(f.get(zero_index(m)).lifted(out_order),
                            g.get(zero_index(m)).lifted(out_order));
    }
    // Nonzero entries of w0 with their weights.
    std::vector<std::tuple<int, int, Rational>> pairs;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (w0.at(i, j) != 0) pairs.emplace_back(i, j, w0.at(i, j));
        }
    }
    ScalarJet acc(m, out_order);
    if (pairs.empty()) return acc;

    // Enumerate r-tuples of nonzero (i, j) pairs.
    std::vector<std::size_t> pick(static_cast<std::size_t>(r), 0);
    while (true) {
        MultiIndex af = zero_index(m), ag = zero_index(m);
        Rational weight = 1;
        for (int s = 0; s < r; ++s) {
            const auto& [i, j, v] = pairs[pick[static_cast<std::size_t>(s)]];
            ++af[static_cast<std::size_t>(i)];
            ++ag[static_cast<std::size_t>(j)];
            weight *= v;
        }
        const ScalarJet& df = f.get(af);
        if (!df.is_zero()) {
            const ScalarJet& dg = g.get(ag);
            if (!dg.is_zero()) {
                acc += weight * jet_multiply(df.lifted(out_order), dg.lifted(out_order));
            }
        }
        // advance the tuple
        int pos = r - 1;
        while (pos >= 0 && pick[static_cast<std::size_t>(pos)] + 1 == pairs.size()) {
            pick[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++pick[static_cast<std::size_t>(pos)];
    }
    const Rational scale = Rational(1) / (Rational(factorial(r)) * Rational(1 << r));
    return scale * acc;
}

} // namespace

FormalSeries<ScalarJet> moyal_star(const MatrixQ& w0, const ScalarJet& f, const ScalarJet& g,
                                   int hbar_order) {
    require_antisymmetric_constant(w0);
    require_hbar_order(hbar_order);
    if (f.dim() != g.dim() || w0.rows() != f.dim()) {
        throw StructuralError("moyal: dimension mismatch");
    }
    if (std::min(f.order(), g.order()) < 2 * hbar_order) {
        throw DomainError("moyal: jets must have order >= 2N");
    }
    const int m = f.dim();
    const int out_order = f.order() + g.order();
    PartialTable tf(f), tg(g);
    FormalSeries<ScalarJet> out;
    out.hbar_order = hbar_order;
    for (int r = 0; r <= hbar_order; ++r) {
        out.coefficients.push_back(moyal_coefficient(w0, tf, tg, m, r, out_order));
    }
    return out;
}

FormalSeries<ScalarJet> series_from_jet(const ScalarJet& f, int hbar_order) {
    FormalSeries<ScalarJet> s;
    s.hbar_order = hbar_order;
    s.coefficients.push_back(f);
    for (int r = 1; r <= hbar_order; ++r) {
        s.coefficients.push_back(ScalarJet(f.dim(), f.order()));
    }
    return s;
}

FormalSeries<ScalarJet> moyal_star_series(const MatrixQ& w0, const FormalSeries<ScalarJet>& a,
                                          const FormalSeries<ScalarJet>& b, int hbar_order) {
    require_antisymmetric_constant(w0);
    require_hbar_order(hbar_order);
    const int m = a.coefficients.front().dim();

    // Pre-lift all slots to one common polynomial order.
    int max_order = 0;
    for (const auto& c : a.coefficients) max_order = std::max(max_order, c.order());
    for (const auto& c : b.coefficients) max_order = std::max(max_order, c.order());

    FormalSeries<ScalarJet> out;
    out.hbar_order = hbar_order;
    for (int r = 0; r <= hbar_order; ++r) {
        out.coefficients.push_back(ScalarJet(m, 2 * max_order));
    }
    for (int i = 0; i <= std::min(hbar_order, a.hbar_order); ++i) {
        PartialTable ta(a.coefficients[static_cast<std::size_t>(i)].lifted(max_order));
        for (int j = 0; i + j <= hbar_order && j <= b.hbar_order; ++j) {
            PartialTable tb(b.coefficients[static_cast<std::size_t>(j)].lifted(max_order));
            for (int s = 0; i + j + s <= hbar_order; ++s) {
                out.coefficients[static_cast<std::size_t>(i + j + s)] +=
                    moyal_coefficient(w0, ta, tb, m, s, 2 * max_order);
            }
        }
    }
    return out;
}

bool associativity_check(const MatrixQ& w0, const ScalarJet& f, const ScalarJet& g,
                         const ScalarJet& h, int hbar_order) {
    const FormalSeries<ScalarJet> fg = moyal_star(w0, f, g, hbar_order);
    const FormalSeries<ScalarJet> gh = moyal_star(w0, g, h, hbar_order);
    const FormalSeries<ScalarJet> lhs =
        moyal_star_series(w0, fg, series_from_jet(h, hbar_order), hbar_order);
    const FormalSeries<ScalarJet> rhs =
        moyal_star_series(w0, series_from_jet(f, hbar_order), gh, hbar_order);
    for (int r = 0; r <= hbar_order; ++r) {
        const int common = std::max(lhs.at(r).order(), rhs.at(r).order());
        if (!(lhs.at(r).lifted(common) == rhs.at(r).lifted(common))) return false;
    }
    return true;
}

StarBackend moyal_backend() {
    StarBackend backend;
    backend.name = "moyal";
    backend.supported_order = [](const TensorJet& w) {
        for (const auto& [key, v] : w.entries()) {
            if (degree(key.first) > 0) return 1;
        }
        return kMaxHbarOrder;
    };
    backend.coefficient = [](const TensorJet& w, const ScalarJet& f, const ScalarJet& g,
                             int r) -> ScalarJet {
        const int m = f.dim();
        const int out_order = f.order() + g.order();
        if (r == 1) {
            // exact for any poisson jet, constant or not
            return (Rational(1, 2) * poisson_bracket(w, f, g)).lifted(out_order);
        }
        MatrixQ w0(m, m);
        const MultiIndex zero = zero_index(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) w0.at(i, j) = w.component(zero, IndexTuple{i, j});
        }
        PartialTable tf(f), tg(g);
        return moyal_coefficient(w0, tf, tg, m, r, out_order);
    };
    return backend;
}

FormalSeries<Rational> canonical_star_at_point(const ConnectionJet& theta, const TensorJet& w,
                                               const ScalarJet& f, const ScalarJet& g,
                                               int hbar_order) {
    return canonical_star_at_point(theta, w, f, g, hbar_order, moyal_backend());
}

FormalSeries<Rational> canonical_star_at_point(const ConnectionJet& theta, const TensorJet& w,
                                               const ScalarJet& f, const ScalarJet& g,
                                               int hbar_order, const StarBackend& backend) {
    require_poisson_jet(w);
    require_hbar_order(hbar_order);
    const int m = theta.dim();
    if (w.dim() != m || f.dim() != m || g.dim() != m) {
        throw StructuralError("canonical star: dimension mismatch");
    }
    check_jacobi(w);

    FormalSeries<Rational> out;
    out.hbar_order = hbar_order;
    out.coefficients.push_back(f.value_at_zero() * g.value_at_zero());
    if (hbar_order == 0) return out;

    if (hbar_order == 1) {
        // The hbar^1 skew term is tensorial: any chart centered at the point
        // gives the same value, so no adaptation is needed.
        if (f.order() < 1 || g.order() < 1) {
            throw DomainError("canonical star: jets must have order >= 1");
        }
        out.coefficients.push_back(Rational(1, 2) *
                                   poisson_bracket(w, f, g).value_at_zero());
        return out;
    }

    const int n_adapt = hbar_order;
    if (theta.order() < n_adapt) {
        throw DomainError("canonical star: connection order below the adaptation order N");
    }
    if (f.order() < hbar_order || g.order() < hbar_order) {
        throw DomainError("canonical star: jets must have order >= N");
    }

    // Values mod hbar^{N+1} read only slots <= N of the transported data, so
    // the chart may be assembled with zero factors above degree N+2.
    const int chart_order = 2 * hbar_order + 1;
    const DiffeoJet chart =
        normalize_connection(theta.truncated(n_adapt), n_adapt).normalizer.assemble(chart_order);

    const int w_order = std::min(w.order(), 2 * hbar_order - 2);
    const TensorJet w_adapted = act_on_tensor_jet(chart, w.truncated(w_order));
    if (backend.supported_order(w_adapted) < hbar_order) {
        throw BackendIncompleteError(
            "canonical star: the transported poisson jet is outside the \"" + backend.name +
            "\" backend's range at this hbar order (for moyal: not constant through order 2N-2); "
            "only the hbar^1 term exists for it");
    }

    // Scalars ride along as f(chart^{-1}(x)). Their values at 0 through slot
    // N are all the series below reads, so the zero-lift to order 2N that the
    // backend wants is value-exact.
    const int lift = 2 * hbar_order;
    const DiffeoJet chart_inv = diffeo_invert(chart);
    const auto transport = [&](const ScalarJet& s) {
        const int so = std::min(s.order(), chart_order - 1);
        std::vector<ScalarJet> comps;
        comps.reserve(chart_inv.components().size());
        for (const auto& c : chart_inv.components()) comps.push_back(c.truncated(so));
        return jet_compose(s.truncated(so), comps).lifted(lift);
    };
    const ScalarJet f_adapted = transport(f);
    const ScalarJet g_adapted = transport(g);

    out.coefficients.clear();
    out.coefficients.push_back(f_adapted.value_at_zero() * g_adapted.value_at_zero());
    for (int r = 1; r <= hbar_order; ++r) {
        out.coefficients.push_back(
            backend.coefficient(w_adapted, f_adapted, g_adapted, r).value_at_zero());
    }
    return out;
}

} // namespace jetnorm
