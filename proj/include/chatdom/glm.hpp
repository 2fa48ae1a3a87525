#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

// Binary-response logistic regression fitted by damped Newton (IRLS)
// iterations, with the diagnostics used to compare dominance models:
// standard errors, Wald chi-square, residual deviance and AIC.
namespace chatdom::glm {

inline constexpr const char* kIntercept = "Intercept";

// Observations by named columns. Column 0 is always the intercept.
struct DesignMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    // Prepends the intercept column. rows[i] holds one value per
    // predictor name. Throws ModelError on shape mismatches.
    static DesignMatrix build(const std::vector<std::string>& predictors,
                              const std::vector<std::vector<double>>& rows, std::span<const int> response);

    std::size_t n() const { return static_cast<std::size_t>(x.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(x.cols()); }

    // Throws ModelError: length mismatch, non-finite values, duplicate
    // names, first column not the intercept, response not 0/1.
    void validate() const;
};

struct FitOptions {
    double tol = 1e-8;          // gradient max-norm at convergence
    int max_iter = 100;
    double beta_bound = 30.0;   // |beta| beyond this while improving => separation
    double ridge = 0.0;         // L2 penalty on non-intercept coefficients
};

struct LogitModel {
    std::vector<std::string> names;
    std::vector<double> beta;
    std::vector<double> std_error;
    std::vector<double> wald_chisq;
    double residual_deviance = 0.0;
    double aic = 0.0;
    int n_params = 0;
    std::size_t n_obs = 0;
    bool converged = false;
    int iterations = 0;
    double gradient_max_norm = 0.0;
    std::optional<std::string> separation;  // diagnostic when (quasi-)separation was detected

    std::optional<std::size_t> index_of(const std::string& name) const;
};

// Bernoulli log-likelihood with logistic link and its gradient (score).
double log_likelihood(const DesignMatrix& d, const Eigen::VectorXd& beta);
Eigen::VectorXd score(const DesignMatrix& d, const Eigen::VectorXd& beta);

// Requires n > p and both classes in the response (ModelError otherwise).
// A rank-deficient design throws ModelError naming the collinear columns.
// Separation is never reported as converged: the model comes back with
// converged = false and a diagnostic in `separation`.
LogitModel fit(const DesignMatrix& design, const FitOptions& options = {});

double logistic(double eta);

// row supplies every non-intercept column by name; throws ModelError
// naming the missing ones. Extra entries are ignored.
double predict_prob(const LogitModel& model, const std::map<std::string, double>& row);
double predict_prob(const LogitModel& model, std::span<const double> row_without_intercept);

// -2 * sum of Bernoulli log-likelihoods, probabilities clamped to
// [1e-12, 1 - 1e-12]. Column names must match the model's.
double deviance(const LogitModel& model, const DesignMatrix& design);

double aic(double residual_deviance, int n_params);
double aic(const LogitModel& model);

struct RankedModel {
    std::string name;
    double aic = 0.0;
    double delta = 0.0;  // aic - best aic
    int n_params = 0;
};

// Ascending AIC; ties by fewer parameters, then by name. Needs >= 2 models.
std::vector<RankedModel> compare_models(const std::vector<std::pair<std::string, LogitModel>>& models);

// Upper tail of chi-square with one degree of freedom.
double chisq1_pvalue(double chisq);
// "***" p < 0.0001, "**" p < 0.001, "*" p < 0.05, otherwise "".
std::string significance_stars(double chisq);

nlohmann::json to_json(const LogitModel& model);
// Reads a model document; estimates are required, the rest optional.
// Throws ConfigError on malformed documents or an AIC that disagrees
// with deviance + 2k.
LogitModel model_from_json(const nlohmann::json& j);
LogitModel load_model(std::istream& in);

// Parameter,Est.,Std. Error,Chi-Square,p,stars table plus deviance/AIC.
void write_coefficient_table(std::ostream& out, const std::string& title, const LogitModel& model);

}  // namespace chatdom::glm
