#pragma once

#include <stdexcept>
#include <string>

namespace dtv {

/// Coarse classification used by callers (notably the CLI) to map failures
/// to exit codes: the request is outside the supported domain, an iteration
/// gave up, or the answer exists but cannot be certified at the requested
/// accuracy.
enum class ErrorKind { domain, convergence, ill_conditioned };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// -- domain ------------------------------------------------------------

struct InvalidTau : Error {
    explicit InvalidTau(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct PoleAtLattice : Error {
    explicit PoleAtLattice(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct PoleAtSingularity : Error {
    explicit PoleAtSingularity(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct UnsupportedIndex : Error {
    explicit UnsupportedIndex(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct BranchPoint : Error {
    explicit BranchPoint(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct GuardB2 : Error {
    explicit GuardB2(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct DivisionGuard : Error {
    explicit DivisionGuard(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct PoleOfSolution : Error {
    explicit PoleOfSolution(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct NotARoot : Error {
    explicit NotARoot(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct LeftDomain : Error {
    explicit LeftDomain(const std::string& w) : Error(ErrorKind::domain, w) {}
};

// -- convergence -------------------------------------------------------

struct AccuracyUnreachable : Error {
    explicit AccuracyUnreachable(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct PathTooClose : Error {
    explicit PathTooClose(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct IntegratorFailure : Error {
    explicit IntegratorFailure(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct AmbiguousB : Error {
    explicit AmbiguousB(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct BranchJump : Error {
    explicit BranchJump(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct NoiseDominated : Error {
    explicit NoiseDominated(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct CollisionWithHalfPeriod : Error {
    explicit CollisionWithHalfPeriod(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

struct FitUnstable : Error {
    explicit FitUnstable(const std::string& w) : Error(ErrorKind::convergence, w) {}
};

// -- ill conditioned ---------------------------------------------------

struct IllConditioned : Error {
    explicit IllConditioned(const std::string& w) : Error(ErrorKind::ill_conditioned, w) {}
};

struct NotSimple : Error {
    explicit NotSimple(const std::string& w) : Error(ErrorKind::ill_conditioned, w) {}
};

/// A decision threshold was hit inside its grey zone; both candidate
/// multiplicities are carried so the caller can report them.
struct ThresholdAmbiguous : Error {
    ThresholdAmbiguous(const std::string& w, int d_low_, int d_high_)
        : Error(ErrorKind::ill_conditioned, w), d_low(d_low_), d_high(d_high_) {}
    int d_low;
    int d_high;
};

} // namespace dtv
