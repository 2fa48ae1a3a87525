#include "chatdom/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "chatdom/error.hpp"
#include "chatdom/text.hpp"

namespace chatdom::glm {

namespace {

constexpr double kClamp = 1e-12;
// Relative Newton step below which a small gradient counts as converged.
// Under separation the gradient decays while the step stays O(1).
constexpr double kStepTol = 1e-6;

// log(1 + exp(eta)) without overflow.
double softplus(double eta) {
    return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

Eigen::VectorXd probabilities(const DesignMatrix& d, const Eigen::VectorXd& beta) {
    Eigen::VectorXd eta = d.x * beta;
    return eta.unaryExpr([](double e) { return logistic(e); });
}

double penalty(const Eigen::VectorXd& beta, double ridge) {
    if (ridge == 0.0) return 0.0;
    return 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k];
    return out;
}

// Collinear columns via column-pivoted QR on the unit-norm design.
std::vector<std::string> collinear_columns(const DesignMatrix& d) {
    Eigen::MatrixXd scaled = d.x;
    std::vector<std::string> zero;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        const double norm = scaled.col(j).norm();
        if (norm == 0.0)
            zero.push_back(d.names[static_cast<std::size_t>(j)]);
        else
            scaled.col(j) /= norm;
    }
    if (!zero.empty()) return zero;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    std::vector<std::string> out;
    if (rank == scaled.cols()) return out;
    const auto& perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> dropped(perm.data() + rank, perm.data() + perm.size());
    std::sort(dropped.begin(), dropped.end());
    for (Eigen::Index j : dropped) out.push_back(d.names[static_cast<std::size_t>(j)]);
    return out;
}

}  // namespace

DesignMatrix DesignMatrix::build(const std::vector<std::string>& predictors,
                                 const std::vector<std::vector<double>>& rows, std::span<const int> response) {
    if (rows.size() != response.size())
        throw ModelError("design has " + std::to_string(rows.size()) + " rows but " +
                         std::to_string(response.size()) + " responses");
    DesignMatrix d;
    d.names.push_back(kIntercept);
    d.names.insert(d.names.end(), predictors.begin(), predictors.end());
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(d.names.size());
    d.x.resize(n, p);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (r.size() != predictors.size())
            throw ModelError("design row " + std::to_string(i) + " has " + std::to_string(r.size()) +
                             " values, expected " + std::to_string(predictors.size()));
        d.x(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < p; ++j) d.x(i, j) = r[static_cast<std::size_t>(j - 1)];
        d.y(i) = response[static_cast<std::size_t>(i)];
    }
    d.validate();
    return d;
}

void DesignMatrix::validate() const {
    if (names.empty() || names.front() != kIntercept)
        throw ModelError("first design column must be the intercept");
    if (static_cast<std::size_t>(x.cols()) != names.size())
        throw ModelError("design has " + std::to_string(x.cols()) + " columns but " +
                         std::to_string(names.size()) + " names");
    if (x.rows() != y.size()) throw ModelError("design and response lengths differ");
    std::set<std::string> seen;
    for (const auto& nm : names)
        if (!seen.insert(nm).second) throw ModelError("duplicate column name '" + nm + "'");
    if (!x.allFinite()) throw ModelError("design contains non-finite values");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 0.0 && y(i) != 1.0) throw ModelError("response must be 0/1");
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        if (x(i, 0) != 1.0) throw ModelError("intercept column must be all ones");
}

std::optional<std::size_t> LogitModel::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

double logistic(double eta) {
    if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double log_likelihood(const DesignMatrix& d, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = d.x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += d.y(i) * eta(i) - softplus(eta(i));
    return ll;
}

Eigen::VectorXd score(const DesignMatrix& d, const Eigen::VectorXd& beta) {
    return d.x.transpose() * (d.y - probabilities(d, beta));
}

LogitModel fit(const DesignMatrix& design, const FitOptions& options) {
    design.validate();
    const auto n = static_cast<Eigen::Index>(design.n());
    const auto p = static_cast<Eigen::Index>(design.p());
    if (n <= p)
        throw ModelError("need more observations (" + std::to_string(n) + ") than parameters (" +
                         std::to_string(p) + ")");
    const double positives = design.y.sum();
    if (positives == 0.0 || positives == static_cast<double>(n))
        throw ModelError("response has a single class; logistic regression needs both 0 and 1");
    if (auto bad = collinear_columns(design); !bad.empty())
        throw ModelError("design is rank deficient; collinear columns: " + join(bad));
    if (options.tol <= 0 || options.max_iter < 1 || options.beta_bound <= 0 || options.ridge < 0)
        throw ConfigError("invalid fit options");

    Eigen::VectorXd ridge_diag = Eigen::VectorXd::Constant(p, options.ridge);
    ridge_diag(0) = 0.0;

    auto objective = [&](const Eigen::VectorXd& b) {
        return -2.0 * log_likelihood(design, b) + 2.0 * penalty(b, options.ridge);
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    const double ybar = positives / static_cast<double>(n);
    beta(0) = std::log(ybar / (1.0 - ybar));

    LogitModel m;
    m.names = design.names;
    m.n_params = static_cast<int>(p);
    m.n_obs = design.n();

    Eigen::MatrixXd info(p, p);
    Eigen::VectorXd grad(p), step(p);
    double dev = objective(beta);
    int iter = 0;
    bool stalled = false;

    for (;; ++iter) {
        const Eigen::VectorXd prob = probabilities(design, beta);
        const Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
        grad = design.x.transpose() * (design.y - prob) - ridge_diag.cwiseProduct(beta);
        info = design.x.transpose() * (design.x.array().colwise() * w.array()).matrix();
        info.diagonal() += ridge_diag;
        m.gradient_max_norm = grad.lpNorm<Eigen::Infinity>();

        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        step = ldlt.solve(grad);
        const bool solvable = ldlt.info() == Eigen::Success && step.allFinite() && ldlt.isPositive();
        const double beta_scale = 1.0 + beta.lpNorm<Eigen::Infinity>();

        if (m.gradient_max_norm <= options.tol &&
            (!solvable || step.lpNorm<Eigen::Infinity>() <= kStepTol * beta_scale)) {
            m.converged = solvable;
            break;
        }
        if (!solvable) {
            m.separation = "information matrix became singular while the likelihood was still "
                           "improving; the data are likely (quasi-)separated";
            break;
        }
        if (iter == options.max_iter) {
            if (m.gradient_max_norm <= options.tol)
                m.separation = "gradient vanished but Newton steps are not shrinking after " +
                               std::to_string(iter) + " iterations; the data are likely (quasi-)separated";
            break;
        }

        // Step halving until the deviance does not increase.
        double t = 1.0;
        Eigen::VectorXd candidate;
        double cand_dev = dev;
        bool accepted = false;
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(dev));
        for (int h = 0; h < 60; ++h, t *= 0.5) {
            candidate = beta + t * step;
            cand_dev = objective(candidate);
            if (std::isfinite(cand_dev) && cand_dev <= dev + slack) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            stalled = true;
            break;
        }
        const bool improving = cand_dev < dev;
        beta = candidate;
        dev = cand_dev;

        if (improving && beta.lpNorm<Eigen::Infinity>() > options.beta_bound) {
            std::vector<std::string> large;
            for (Eigen::Index j = 0; j < p; ++j)
                if (std::abs(beta(j)) > options.beta_bound) large.push_back(design.names[static_cast<std::size_t>(j)]);
            m.separation = "coefficient(s) exceeded the bound " + text::format_number(options.beta_bound) +
                           " while the likelihood was still improving: " + join(large) +
                           "; the data are likely (quasi-)separated";
            ++iter;
            break;
        }
    }

    if (stalled) {
        // Deviance cannot be lowered further in floating point.
        const Eigen::VectorXd prob = probabilities(design, beta);
        grad = design.x.transpose() * (design.y - prob) - ridge_diag.cwiseProduct(beta);
        m.gradient_max_norm = grad.lpNorm<Eigen::Infinity>();
        m.converged = m.gradient_max_norm <= options.tol;
    }
    if (m.separation) m.converged = false;

    {
        const Eigen::VectorXd prob = probabilities(design, beta);
        const Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
        info = design.x.transpose() * (design.x.array().colwise() * w.array()).matrix();
        info.diagonal() += ridge_diag;
    }
    const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

    m.iterations = iter;
    m.beta.assign(beta.data(), beta.data() + p);
    m.std_error.resize(static_cast<std::size_t>(p));
    m.wald_chisq.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double var = cov(j, j);
        m.std_error[k] = var > 0 && std::isfinite(var) ? std::sqrt(var) : std::numeric_limits<double>::infinity();
        m.wald_chisq[k] = (m.beta[k] / m.std_error[k]) * (m.beta[k] / m.std_error[k]);
    }
    m.residual_deviance = -2.0 * log_likelihood(design, beta);
    m.aic = aic(m.residual_deviance, m.n_params);
    return m;
}

double predict_prob(const LogitModel& model, const std::map<std::string, double>& row) {
    double eta = 0.0;
    std::vector<std::string> missing;
    for (std::size_t k = 0; k < model.names.size(); ++k) {
        if (model.names[k] == kIntercept) {
            eta += model.beta[k];
            continue;
        }
        auto it = row.find(model.names[k]);
        if (it == row.end())
            missing.push_back(model.names[k]);
        else
            eta += model.beta[k] * it->second;
    }
    if (!missing.empty()) throw ModelError("row is missing model column(s): " + join(missing));
    return logistic(eta);
}

double predict_prob(const LogitModel& model, std::span<const double> row) {
    if (row.size() + 1 != model.beta.size())
        throw ModelError("row has " + std::to_string(row.size()) + " values, model expects " +
                         std::to_string(model.beta.size() - 1));
    double eta = model.beta[0];
    for (std::size_t k = 0; k < row.size(); ++k) eta += model.beta[k + 1] * row[k];
    return logistic(eta);
}

double deviance(const LogitModel& model, const DesignMatrix& design) {
    if (model.names != design.names) throw ModelError("design columns do not match the model's columns");
    const Eigen::Map<const Eigen::VectorXd> beta(model.beta.data(), static_cast<Eigen::Index>(model.beta.size()));
    const Eigen::VectorXd prob = probabilities(design, beta);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < prob.size(); ++i) {
        const double pi = std::clamp(prob(i), kClamp, 1.0 - kClamp);
        sum += design.y(i) * std::log(pi) + (1.0 - design.y(i)) * std::log(1.0 - pi);
    }
    return -2.0 * sum;
}

double aic(double residual_deviance, int n_params) { return residual_deviance + 2.0 * n_params; }

double aic(const LogitModel& model) { return aic(model.residual_deviance, model.n_params); }

std::vector<RankedModel> compare_models(const std::vector<std::pair<std::string, LogitModel>>& models) {
    if (models.size() < 2) throw ConfigError("model comparison needs at least two models");
    std::vector<RankedModel> out;
    for (const auto& [name, m] : models) out.push_back({name, aic(m), 0.0, m.n_params});
    std::stable_sort(out.begin(), out.end(), [](const RankedModel& a, const RankedModel& b) {
        if (a.aic != b.aic) return a.aic < b.aic;
        if (a.n_params != b.n_params) return a.n_params < b.n_params;
        return a.name < b.name;
    });
    for (auto& r : out) r.delta = r.aic - out.front().aic;
    return out;
}

double chisq1_pvalue(double chisq) {
    if (!(chisq > 0)) return 1.0;
    return std::erfc(std::sqrt(chisq / 2.0));
}

std::string significance_stars(double chisq) {
    const double pv = chisq1_pvalue(chisq);
    if (pv < 0.0001) return "***";
    if (pv < 0.001) return "**";
    if (pv < 0.05) return "*";
    return "";
}

nlohmann::json to_json(const LogitModel& m) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json cols = nlohmann::json::array();
    for (std::size_t k = 0; k < m.names.size(); ++k)
        cols.push_back({{"name", m.names[k]},
                        {"estimate", m.beta[k]},
                        {"std_error", num(m.std_error[k])},
                        {"wald_chisq", num(m.wald_chisq[k])}});
    return {{"columns", cols},
            {"residual_deviance", m.residual_deviance},
            {"aic", m.aic},
            {"n_params", m.n_params},
            {"n_obs", m.n_obs},
            {"converged", m.converged},
            {"iterations", m.iterations},
            {"gradient_max_norm", m.gradient_max_norm},
            {"separation", m.separation ? nlohmann::json(*m.separation) : nlohmann::json(nullptr)}};
}

LogitModel model_from_json(const nlohmann::json& j) {
    try {
        LogitModel m;
        const auto& cols = j.at("columns");
        if (!cols.is_array() || cols.empty()) throw ConfigError("model 'columns' must be a non-empty array");
        for (const auto& c : cols) {
            m.names.push_back(c.at("name").get<std::string>());
            m.beta.push_back(c.at("estimate").get<double>());
            auto opt = [&](const char* key) {
                return c.contains(key) && c[key].is_number() ? c[key].get<double>()
                                                             : std::numeric_limits<double>::quiet_NaN();
            };
            m.std_error.push_back(opt("std_error"));
            m.wald_chisq.push_back(opt("wald_chisq"));
        }
        if (m.names.front() != kIntercept) throw ConfigError("first model column must be 'Intercept'");
        std::set<std::string> seen(m.names.begin(), m.names.end());
        if (seen.size() != m.names.size()) throw ConfigError("model column names must be unique");

        m.n_params = static_cast<int>(m.names.size());
        if (j.contains("n_params") && j["n_params"].get<int>() != m.n_params)
            throw ConfigError("model n_params disagrees with its column count");
        m.n_obs = j.value("n_obs", std::size_t{0});
        m.converged = j.value("converged", true);
        m.iterations = j.value("iterations", 0);
        m.gradient_max_norm = j.value("gradient_max_norm", 0.0);
        if (j.contains("separation") && j["separation"].is_string()) m.separation = j["separation"].get<std::string>();
        m.residual_deviance = j.value("residual_deviance", std::numeric_limits<double>::quiet_NaN());
        m.aic = aic(m.residual_deviance, m.n_params);
        if (j.contains("aic") && std::isfinite(m.residual_deviance)) {
            const double stated = j["aic"].get<double>();
            if (std::abs(stated - m.aic) > 1e-9 * std::max(1.0, std::abs(stated)))
                throw ConfigError("model aic " + text::format_number(stated) +
                                  " disagrees with residual_deviance + 2 * n_params = " +
                                  text::format_number(m.aic));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed model document: ") + e.what());
    }
}

LogitModel load_model(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model file is not valid JSON: ") + e.what());
    }
    return model_from_json(j);
}

void write_coefficient_table(std::ostream& out, const std::string& title, const LogitModel& m) {
    using text::format_number;
    out << "# " << title << "\n";
    out << "parameter,estimate,std_error,wald_chisq,p_value,significance\n";
    for (std::size_t k = 0; k < m.names.size(); ++k)
        out << m.names[k] << ',' << format_number(m.beta[k]) << ',' << format_number(m.std_error[k]) << ','
            << format_number(m.wald_chisq[k]) << ',' << format_number(chisq1_pvalue(m.wald_chisq[k])) << ','
            << significance_stars(m.wald_chisq[k]) << '\n';
    out << "residual_deviance," << format_number(m.residual_deviance) << "\n";
    out << "aic," << format_number(m.aic) << "\n";
    out << "converged," << (m.converged ? "true" : "false") << "\n";
    if (m.separation) out << "separation,\"" << *m.separation << "\"\n";
}

}  // namespace chatdom::glm
