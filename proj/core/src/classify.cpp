#include "metricdiff/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace metricdiff::classify {

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

// Applies the declared fill policy to one per-class value.
std::optional<double> apply_fill(std::optional<double> v, ZeroDivPolicy policy, bool& filled) {
    if (v || policy == ZeroDivPolicy::Undefined || policy == ZeroDivPolicy::Drop) return v;
    filled = true;
    return policy == ZeroDivPolicy::Zero ? 0.0 : 1.0;
}

struct AggregateOutcome {
    std::optional<double> value;
    bool filled = false;
};

// Mean of per-class values under the fill policy. Weights are class supports
// for the weighted flavour, all-ones for macro. Undefined entries poison the
// mean unless the policy fills or drops them.
AggregateOutcome aggregate(const std::vector<std::optional<double>>& values,
                           const std::vector<std::int64_t>& support, bool weighted,
                           ZeroDivPolicy policy) {
    double num = 0.0, den = 0.0;
    bool filled = false;
    for (std::size_t k = 0; k < values.size(); ++k) {
        std::optional<double> v = apply_fill(values[k], policy, filled);
        const double w = weighted ? static_cast<double>(support[k]) : 1.0;
        if (!v) {
            if (policy == ZeroDivPolicy::Drop) {
                filled = true;
                continue;
            }
            return {std::nullopt, false};
        }
        num += w * *v;
        den += w;
    }
    if (den == 0.0) return {std::nullopt, false};
    return {num / den, filled};
}

std::optional<double> f_measure(std::optional<double> p, std::optional<double> r, double beta) {
    if (!p || !r) return std::nullopt;
    const double b2 = beta * beta;
    const double den = b2 * *p + *r;
    if (den == 0.0) return std::nullopt;  // p == r == 0
    return (1.0 + b2) * *p * *r / den;
}

}  // namespace

PRFReport prf_report(const ConfusionMatrix& cm, const PRFOptions& opts) {
    if (!(opts.beta >= 0.0)) throw std::invalid_argument("prf_report: beta must be >= 0");
    const std::size_t K = cm.k();
    const std::int64_t n = cm.total();

    PRFReport rep;
    rep.beta = opts.beta;
    rep.precision.resize(K);
    rep.recall.resize(K);
    rep.f.resize(K);
    rep.jaccard.resize(K);
    rep.support.resize(K);

    std::int64_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const std::int64_t tp = cm.tp(k), fp = cm.fp(k), fn = cm.fn(k);
        tp_sum += tp;
        fp_sum += fp;
        fn_sum += fn;
        rep.support[k] = cm.row_sum(k);
        rep.precision[k] = ratio(tp, tp + fp);
        rep.recall[k] = ratio(tp, tp + fn);
        rep.f[k] = f_measure(rep.precision[k], rep.recall[k], opts.beta);
        rep.jaccard[k] = ratio(tp, tp + fp + fn);
    }

    // Micro aggregates pool counts first. For single-label data the pooled
    // false positives and false negatives coincide (both count n - trace), so
    // micro precision, recall and F all equal accuracy.
    rep.precision_agg.micro = ratio(tp_sum, tp_sum + fp_sum);
    rep.recall_agg.micro = ratio(tp_sum, tp_sum + fn_sum);
    // F from the pooled counts, not the harmonic of the pooled ratios: the
    // count form stays defined when the trace is zero, keeping micro F equal
    // to accuracy on every non-empty single-label instance.
    const double b2 = opts.beta * opts.beta;
    const double f_num = (1.0 + b2) * static_cast<double>(tp_sum);
    const double f_den = f_num + b2 * static_cast<double>(fn_sum) + static_cast<double>(fp_sum);
    rep.f_agg.micro =
        f_den == 0.0 ? std::nullopt : std::optional<double>(f_num / f_den);
    rep.jaccard_agg.micro = ratio(tp_sum, tp_sum + fp_sum + fn_sum);

    auto fill_agg = [&](AggregateSet& agg, const std::vector<std::optional<double>>& vals) {
        auto m = aggregate(vals, rep.support, false, opts.zero_division);
        agg.macro = m.value;
        agg.macro_filled = m.filled;
        auto w = aggregate(vals, rep.support, true, opts.zero_division);
        agg.weighted = w.value;
        agg.weighted_filled = w.filled;
    };
    fill_agg(rep.precision_agg, rep.precision);
    fill_agg(rep.recall_agg, rep.recall);
    fill_agg(rep.f_agg, rep.f);
    fill_agg(rep.jaccard_agg, rep.jaccard);

    (void)n;
    return rep;
}

ScalarResult accuracy(const ConfusionMatrix& cm) {
    const std::int64_t n = cm.total();
    if (n == 0) return ScalarResult::undefined("empty confusion matrix");
    return ScalarResult::ok(static_cast<double>(cm.trace()) / static_cast<double>(n));
}

ScalarResult balanced_accuracy(const ConfusionMatrix& cm, BalancedAccuracyVariant variant,
                               ZeroDivPolicy policy) {
    const std::size_t K = cm.k();
    std::vector<std::optional<double>> recalls(K);
    std::vector<std::int64_t> support(K);
    for (std::size_t k = 0; k < K; ++k) {
        support[k] = cm.row_sum(k);
        recalls[k] = ratio(cm.tp(k), cm.tp(k) + cm.fn(k));
    }
    const bool weighted = variant == BalancedAccuracyVariant::WeightedRecall;
    auto agg = aggregate(recalls, support, weighted, policy);
    if (!agg.value) return ScalarResult::undefined("recall undefined for a class");
    if (variant == BalancedAccuracyVariant::ChanceCorrected) {
        const double chance = 1.0 / static_cast<double>(K);
        const double v = (*agg.value - chance) / (1.0 - chance);
        return agg.filled ? ScalarResult::fill(v, "zero-support class filled")
                          : ScalarResult::ok(v);
    }
    return agg.filled ? ScalarResult::fill(*agg.value, "zero-support class filled")
                      : ScalarResult::ok(*agg.value);
}

ScalarResult cohen_kappa(const ConfusionMatrix& cm) {
    const double n = static_cast<double>(cm.total());
    if (n == 0.0) return ScalarResult::undefined("empty confusion matrix");
    const double po = static_cast<double>(cm.trace()) / n;
    double pe = 0.0;
    for (std::size_t k = 0; k < cm.k(); ++k)
        pe += static_cast<double>(cm.row_sum(k)) * static_cast<double>(cm.col_sum(k)) / (n * n);
    if (pe == 1.0) {
        // All mass in one marginal cell: agreement is saturated by chance.
        return po == 1.0 ? ScalarResult::fill(1.0, "degenerate marginals")
                         : ScalarResult::undefined("chance agreement equals 1");
    }
    return ScalarResult::ok((po - pe) / (1.0 - pe));
}

namespace {

ScalarResult binary_mcc_from_counts(double tp, double fp, double fn, double tn) {
    const double den2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    const double num = tp * tn - fp * fn;
    if (den2 <= 0.0) return ScalarResult::fill(0.0, "zero denominator");
    return ScalarResult::ok(num / std::sqrt(den2));
}

}  // namespace

ScalarResult mcc(const ConfusionMatrix& cm, MccVariant variant, std::size_t positive_class) {
    const std::size_t K = cm.k();
    switch (variant) {
        case MccVariant::BinaryPositive: {
            if (positive_class >= K)
                throw std::invalid_argument("mcc: positive class out of range");
            const std::size_t k = positive_class;
            return binary_mcc_from_counts(static_cast<double>(cm.tp(k)),
                                          static_cast<double>(cm.fp(k)),
                                          static_cast<double>(cm.fn(k)),
                                          static_cast<double>(cm.tn(k)));
        }
        case MccVariant::OneVsRestMacro: {
            double sum = 0.0;
            bool any_fill = false;
            for (std::size_t k = 0; k < K; ++k) {
                auto r = binary_mcc_from_counts(static_cast<double>(cm.tp(k)),
                                                static_cast<double>(cm.fp(k)),
                                                static_cast<double>(cm.fn(k)),
                                                static_cast<double>(cm.tn(k)));
                any_fill = any_fill || r.filled;
                sum += *r.value;
            }
            const double v = sum / static_cast<double>(K);
            return any_fill ? ScalarResult::fill(v, "zero denominator in a class")
                            : ScalarResult::ok(v);
        }
        case MccVariant::Generalized: {
            // Covariance form: (n*trace - sum_k row_k*col_k) /
            // sqrt((n^2 - sum col^2)(n^2 - sum row^2)).
            const double n = static_cast<double>(cm.total());
            double tr = static_cast<double>(cm.trace());
            double rc = 0.0, r2 = 0.0, c2 = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double rk = static_cast<double>(cm.row_sum(k));
                const double ck = static_cast<double>(cm.col_sum(k));
                rc += rk * ck;
                r2 += rk * rk;
                c2 += ck * ck;
            }
            const double num = n * tr - rc;
            const double den2 = (n * n - c2) * (n * n - r2);
            if (den2 <= 0.0) return ScalarResult::fill(0.0, "zero denominator");
            return ScalarResult::ok(num / std::sqrt(den2));
        }
    }
    throw std::logic_error("mcc: unreachable");
}

ScalarResult g_mean(const ConfusionMatrix& cm) {
    // an unsupported class poisons the mean even when another recall is 0
    double log_sum = 0.0;
    bool any_zero = false;
    const std::size_t K = cm.k();
    for (std::size_t k = 0; k < K; ++k) {
        const std::int64_t den = cm.tp(k) + cm.fn(k);
        if (den == 0) return ScalarResult::undefined("class without support");
        const double recall = static_cast<double>(cm.tp(k)) / static_cast<double>(den);
        if (recall == 0.0) any_zero = true;
        else log_sum += std::log(recall);
    }
    if (any_zero) return ScalarResult::ok(0.0);
    return ScalarResult::ok(std::exp(log_sum / static_cast<double>(K)));
}

double log_loss(const LabelVector& y_true, const std::vector<double>& probs,
                const LabelSet& labels, double epsilon) {
    const std::size_t n = y_true.size();
    const std::size_t K = labels.size();
    if (probs.size() != n * K)
        throw std::invalid_argument("log_loss: probability matrix must be n x k");
    if (n == 0) throw std::invalid_argument("log_loss: empty input");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("log_loss: epsilon must be in (0, 0.5)");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double p = probs[i * K + k];
            if (p < 0.0) throw std::invalid_argument("log_loss: negative probability");
            // Clip first, renormalize after; the order is observable when a
            // row contains exact zeros.
            row_sum += std::clamp(p, epsilon, 1.0 - epsilon);
        }
        const std::size_t t = labels.index_of(y_true[i]);
        const double p_true = std::clamp(probs[i * K + t], epsilon, 1.0 - epsilon) / row_sum;
        total -= std::log(p_true);
    }
    return total / static_cast<double>(n);
}

ScalarResult roc_auc(const LabelVector& y_true, const ScoreVector& scores, Label positive) {
    const std::size_t n = y_true.size();
    if (scores.size() != n) throw std::invalid_argument("roc_auc: length mismatch");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tie groups, then the rank-sum identity. This equals
    // the pairwise count with half credit for tied scores.
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based mean rank
        for (std::size_t t = i; t < j; ++t) {
            if (y_true[order[t]] == positive) {
                rank_sum_pos += avg_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        return ScalarResult::undefined("both classes required for a ranking");
    const double u1 = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
    return ScalarResult::ok(u1 / (static_cast<double>(n_pos) * static_cast<double>(n_neg)));
}

}  // namespace metricdiff::classify
