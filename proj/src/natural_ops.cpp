#include "jetnorm/natural_ops.hpp"

#include <algorithm>
#include <random>

#include "jetnorm/errors.hpp"

namespace jetnorm {

namespace {

using JetMatrix = std::vector<std::vector<ScalarJet>>;

JetMatrix jet_matrix(int m, int k) {
    return JetMatrix(static_cast<std::size_t>(m),
                     std::vector<ScalarJet>(static_cast<std::size_t>(m), ScalarJet(m, k)));
}

JetMatrix jet_matrix_multiply(const JetMatrix& a, const JetMatrix& b, int m, int k) {
    JetMatrix c = jet_matrix(m, k);
    for (int i = 0; i < m; ++i) {
        for (int q = 0; q < m; ++q) {
            const ScalarJet& aiq = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
            if (aiq.is_zero()) continue;
            for (int j = 0; j < m; ++j) {
                const ScalarJet& bqj = b[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
                if (bqj.is_zero()) continue;
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    jet_multiply(aiq, bqj);
            }
        }
    }
    return c;
}

} // namespace

TensorJet inverse_metric_jet(const TensorJet& h) {
    require_metric_jet(h);
    const int m = h.dim();
    const int k = h.order();
    const MatrixQ b0 = inverse(metric_constant_part(h));

    // h = h0 (I + b0 R) with R the positive-degree part, so
    // h^{-1} = (sum_s (-b0 R)^s) b0; the series ends at degree k.
    JetMatrix rest = jet_matrix(m, k);
    for (const auto& [key, v] : h.entries()) {
        const auto& [a, idx] = key;
        if (degree(a) == 0) continue;
        rest[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])]
            .add_to_coefficient(a, v);
        if (idx[0] != idx[1]) {
            rest[static_cast<std::size_t>(idx[1])][static_cast<std::size_t>(idx[0])]
                .add_to_coefficient(a, v);
        }
    }
    JetMatrix neg_b0_rest = jet_matrix(m, k);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int q = 0; q < m; ++q) {
                if (b0.at(i, q) == 0) continue;
                neg_b0_rest[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    (-b0.at(i, q)) * rest[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
            }
        }
    }

    JetMatrix series = jet_matrix(m, k); // identity accumulator
    for (int i = 0; i < m; ++i) {
        series[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            ScalarJet::constant(m, k, Rational(1));
    }
    JetMatrix power = series;
    for (int s = 1; s <= k; ++s) {
        power = jet_matrix_multiply(power, neg_b0_rest, m, k);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                series[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    power[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
    }

    TensorJet b(m, k, 2, 0, Symmetry::None);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            ScalarJet entry(m, k);
            for (int q = 0; q < m; ++q) {
                if (b0.at(q, j) == 0) continue;
                entry += b0.at(q, j) *
                         series[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
            }
            for (const auto& [a, c] : entry.coefficients()) {
                b.set_component(a, IndexTuple{i, j}, c);
            }
        }
    }
    return b;
}

LocalRule evaluation_rule() {
    LocalRule r;
    r.name = "evaluation";
    r.section_order = 0;
    r.needs_metric = false;
    r.apply = [](const AdaptedFrame&, const TensorJet& s) { return eval_at_zero(s); };
    return r;
}

LocalRule laplacian_rule() {
    LocalRule r;
    r.name = "laplacian";
    r.section_order = 2;
    r.needs_metric = true;
    r.apply = [](const AdaptedFrame& frame, const TensorJet& s) {
        if (s.contra() != 0 || s.cov() != 0) {
            throw StructuralError("laplacian rule: section must be a scalar jet");
        }
        const ScalarJet v = scalar_from_tensor(s);
        const MatrixQ binv = inverse(frame.h0);
        Rational acc = 0;
        const int m = frame.dim;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (binv.at(i, j) == 0) continue;
                acc += binv.at(i, j) * v.partial(i).partial(j).value_at_zero();
            }
        }
        TensorJet out(m, 0, 0, 0, Symmetry::None);
        out.set_component(zero_index(m), IndexTuple{}, acc);
        return out;
    };
    return r;
}

TensorJet eval_in_adapted_chart(const LocalRule& rule, const Background& background,
                                const TensorJet& section) {
    const bool is_metric = std::holds_alternative<TensorJet>(background);
    if (rule.needs_metric && !is_metric) {
        throw StructuralError("adapted evaluation: rule requires a metric background");
    }

    AdaptedFrame frame;
    DiffeoJet chart = DiffeoJet::identity(1, 1);
    int bg_order = 0;
    int bg_dim = 0;
    if (is_metric) {
        const TensorJet& h = std::get<TensorJet>(background);
        bg_order = h.order();
        bg_dim = h.dim();
        if (bg_order < rule.section_order) {
            throw DomainError("adapted evaluation: background order below the rule's order");
        }
        MetricNormalForm nf = normalize_metric(h, bg_order);
        frame.dim = nf.dim;
        frame.metric_background = true;
        frame.h0 = nf.h0;
        frame.invariants = nf.invariants;
        chart = nf.normalizer.assemble(bg_order + 1);
    } else {
        const ConnectionJet& theta = std::get<ConnectionJet>(background);
        bg_order = theta.order();
        bg_dim = theta.dim();
        if (bg_order < rule.section_order) {
            throw DomainError("adapted evaluation: background order below the rule's order");
        }
        ConnectionNormalForm nf = normalize_connection(theta, bg_order);
        frame.dim = nf.dim;
        frame.metric_background = false;
        frame.invariants = nf.invariants;
        chart = nf.normalizer.assemble(bg_order + 2);
    }
    if (section.dim() != bg_dim) {
        throw StructuralError("adapted evaluation: section dimension mismatch");
    }

    const int s_order = std::min(section.order(), bg_order);
    if (s_order < rule.section_order) {
        throw DomainError("adapted evaluation: section order below the rule's order");
    }
    const TensorJet transported = act_on_tensor_jet(chart, section.truncated(s_order));
    return rule.apply(frame, transported);
}

Rational laplacian_at_point(const TensorJet& h, const ScalarJet& v) {
    require_metric_jet(h);
    if (h.dim() != v.dim()) throw StructuralError("laplacian: dimension mismatch");
    if (h.order() < 2) throw DomainError("laplacian: metric jet order must be >= 2");
    if (v.order() < 2) throw DomainError("laplacian: scalar jet order must be >= 2");
    // The chart is pinned at order 2: only the constant metric slot and the
    // second derivatives of the transported scalar are read.
    const TensorJet out = eval_in_adapted_chart(laplacian_rule(), h.truncated(2),
                                                tensor_from_scalar(v.truncated(2)));
    return out.component(zero_index(h.dim()), IndexTuple{});
}

ScalarJet scalar_from_tensor(const TensorJet& t) {
    if (t.contra() != 0 || t.cov() != 0) {
        throw StructuralError("scalar_from_tensor: valence must be (0,0)");
    }
    ScalarJet f(t.dim(), t.order());
    for (const auto& [key, v] : t.entries()) f.set_coefficient(key.first, v);
    return f;
}

TensorJet tensor_from_scalar(const ScalarJet& f) {
    TensorJet t(f.dim(), f.order(), 0, 0, Symmetry::None);
    for (const auto& [a, c] : f.coefficients()) t.set_component(a, IndexTuple{}, c);
    return t;
}

int check_rule_equivariance(const LocalRule& rule, const Background& background,
                            const TensorJet& section, int trials, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-3, 3);

    const bool is_metric = std::holds_alternative<TensorJet>(background);
    const int m = is_metric ? std::get<TensorJet>(background).dim()
                            : std::get<ConnectionJet>(background).dim();
    const int bg_order = is_metric ? std::get<TensorJet>(background).order()
                                   : std::get<ConnectionJet>(background).order();

    const TensorJet base = eval_in_adapted_chart(rule, background, section);

    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        MatrixQ a(m, m);
        do {
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) a.at(i, j) = rational(num(rng), 1 + (t % 2));
            }
        } while (determinant(a) == 0);

        const int chart_order = std::max(bg_order + 2, section.order() + 1);
        const DiffeoJet lin = DiffeoJet::linear(a, chart_order);
        Background moved_bg = is_metric
            ? Background(act_on_tensor_jet(lin, std::get<TensorJet>(background)))
            : Background(act_on_connection_jet(lin, std::get<ConnectionJet>(background)));
        const TensorJet moved_section =
            act_on_tensor_jet(lin.truncated(section.order() + 1), section);

        const TensorJet got = eval_in_adapted_chart(rule, moved_bg, moved_section);
        const TensorJet expected = act_on_tensor_jet(lin.truncated(base.order() + 1), base);
        if (!(got == expected)) ++failures;
    }
    return failures;
}

} // namespace jetnorm
