#include "ouvg/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>

#include "ouvg/errors.hpp"

namespace ouvg {

namespace {

struct Context {
  const std::function<double(const Vector&)>* f;
  Vector scratch;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<Context*>(params);
  for (Index i = 0; i < ctx->scratch.size(); ++i) ctx->scratch(i) = gsl_vector_get(v, static_cast<size_t>(i));
  double y;
  try {
    y = (*ctx->f)(ctx->scratch);
  } catch (const Error&) {
    y = std::numeric_limits<double>::infinity();
  }
  // GSL rejects NaN; a large finite value keeps the simplex moving away.
  return std::isfinite(y) ? y : std::numeric_limits<double>::max() / 16.0;
}

}  // namespace

SimplexResult minimize_simplex(const std::function<double(const Vector&)>& f, const Vector& x0,
                               const Vector& step, const SimplexOptions& options) {
  const auto n = static_cast<size_t>(x0.size());
  if (n == 0 || static_cast<size_t>(step.size()) != n) throw ValidationError("simplex: bad dimensions");
  gsl_set_error_handler_off();
  Context ctx{&f, Vector(x0.size())};
  gsl_multimin_function fn{&trampoline, n, &ctx};

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(gsl_vector_alloc(n), gsl_vector_free);
  for (size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, x0(static_cast<Index>(i)));
    gsl_vector_set(ss.get(), i, step(static_cast<Index>(i)));
  }
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());

  SimplexResult out;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && out.iterations < options.max_iter) {
    ++out.iterations;
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    out.trace.push_back(s->fval);
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), options.size_tol);
  }
  out.converged = status == GSL_SUCCESS;
  out.x.resize(x0.size());
  for (size_t i = 0; i < n; ++i) out.x(static_cast<Index>(i)) = gsl_vector_get(s->x, i);
  out.value = s->fval;
  return out;
}

}  // namespace ouvg
