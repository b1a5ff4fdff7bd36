#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace h2r {

/// Input outside the domain of an operation (points off the disk, bad parameters).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its requested accuracy.
class NumericsError : public std::runtime_error {
public:
    NumericsError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Newton iteration stagnated; carries the residual history.
class NonConvergence : public NumericsError {
public:
    NonConvergence(const std::string& what, std::vector<double> history)
        : NumericsError(what, history.empty() ? 0.0 : history.back()),
          history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// The linearized operator has a near-kernel and no symmetry reduction was requested.
class SingularLinearization : public NumericsError {
public:
    SingularLinearization(const std::string& what, std::vector<double> singular_values)
        : NumericsError(what, singular_values.empty() ? 0.0 : singular_values.front()),
          singular_values_(std::move(singular_values)) {}
    const std::vector<double>& singular_values() const noexcept { return singular_values_; }

private:
    std::vector<double> singular_values_;
};

/// Refinement study could not separate "converging to zero" from "stable".
class IndeterminateError : public NumericsError {
public:
    IndeterminateError(const std::string& what, std::vector<double> trace)
        : NumericsError(what, trace.empty() ? 0.0 : trace.back()), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// No certified witness found within the configured search caps.
class NoWitness : public NumericsError {
public:
    using NumericsError::NumericsError;
};

}  // namespace h2r
