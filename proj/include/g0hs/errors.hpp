#ifndef G0HS_ERRORS_HPP
#define G0HS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace g0hs {

/// Configuration / validation failure (bad config text, missing key,
/// domain rule violated).  Carries the 1-based line number when the
/// failure is tied to a specific line of a config file (0 otherwise).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A time integration produced a non-finite value.  Carries the time at
/// which the failure was detected; the partial trajectory (if any) is
/// attached by the integrator that throws.
class blow_up_error : public std::runtime_error {
public:
    blow_up_error(const std::string& what, double t)
        : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

/// Two pulse positions came closer than the collision threshold; the
/// ODE right-hand side is discontinuous across the coincidence, so the
/// integration halts instead of stepping over it.
class collision_event : public std::runtime_error {
public:
    collision_event(const std::string& what, double t)
        : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

/// A quantity that is raised to a negative power (or divided by) fell
/// below the singularity threshold.  `index` names the offending pulse
/// when applicable (-1 otherwise).
class singularity_error : public std::runtime_error {
public:
    singularity_error(const std::string& what, double t, int index = -1)
        : std::runtime_error(what), t_(t), index_(index) {}
    double time() const { return t_; }
    int index() const { return index_; }

private:
    double t_;
    int index_;
};

/// A tail fit had fewer than the minimum number of usable points.
class insufficient_tail_error : public std::runtime_error {
public:
    explicit insufficient_tail_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// Characteristics crossed: the flow map lost strict monotonicity in
/// the seed index.  Carries the first time at which a crossing was
/// detected.
class crossing_error : public std::runtime_error {
public:
    crossing_error(const std::string& what, double t)
        : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

}  // namespace g0hs

#endif
