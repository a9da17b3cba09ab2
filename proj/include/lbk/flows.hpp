#pragma once

#include "lbk/series.hpp"

namespace lbk {

// Maps between formal vector fields and principal parts of formal flows.
// Everything here acts on primitive series and returns primitive series.

// Flow map: log_conc(exp_gl(x)). Agrees with x modulo grade >= 2.
Series field_to_flow(const Series& x);

// Inverse of field_to_flow: log_gl(exp_conc(b)), the modified field whose
// exact flow has principal part b.
Series backward_error(const Series& b);

// BCH product for concatenation: log_conc(exp_conc(x) . exp_conc(y)).
Series bch_conc(const Series& x, const Series& y);

enum class SharpMode {
  checked,  // compute both routes, throw InternalCheckError on disagreement
  fast      // only the grafting route
};

// Composition of principal flows. Two independent routes:
//   definition: log_conc(exp_conc(x) * exp_conc(y))
//   grafting:   bch_conc(x, graft(exp_conc(x), y))
// `checked` evaluates both and insists on exact agreement.
Series sharp(const Series& x, const Series& y,
#ifdef NDEBUG
             SharpMode mode = SharpMode::fast
#else
             SharpMode mode = SharpMode::checked
#endif
);
Series sharp_definition(const Series& x, const Series& y);
Series sharp_grafting(const Series& x, const Series& y);

// Inverse for the sharp group law, via exp of negated logs (no antipode).
Series sharp_inverse(const Series& x);

}  // namespace lbk
