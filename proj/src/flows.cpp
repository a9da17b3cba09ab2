#include "lbk/flows.hpp"

#include "lbk/errors.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"

namespace lbk {
namespace {

void require_primitive(const Series& x, const char* who) {
  if (!is_primitive(x))
    throw ContractError(std::string(who) + " requires a primitive series");
}

}  // namespace

Series field_to_flow(const Series& x) {
  require_primitive(x, "field_to_flow");
  return log_conc(exp_gl(x));
}

Series backward_error(const Series& b) {
  require_primitive(b, "backward_error");
  return log_gl(exp_conc(b));
}

Series bch_conc(const Series& x, const Series& y) {
  require_primitive(x, "bch_conc");
  require_primitive(y, "bch_conc");
  return log_conc(conc_mul(exp_conc(x), exp_conc(y)));
}

Series sharp_definition(const Series& x, const Series& y) {
  return log_conc(gl_mul(exp_conc(x), exp_conc(y)));
}

Series sharp_grafting(const Series& x, const Series& y) {
  return bch_conc(x, graft(exp_conc(x), y));
}

Series sharp(const Series& x, const Series& y, SharpMode mode) {
  require_primitive(x, "sharp");
  require_primitive(y, "sharp");
  Series fast = sharp_grafting(x, y);
  if (mode == SharpMode::checked) {
    Series direct = sharp_definition(x, y);
    if (!(direct == fast))
      throw InternalCheckError(
          "sharp: definition route and grafting route disagree");
  }
  return fast;
}

Series sharp_inverse(const Series& x) {
  require_primitive(x, "sharp_inverse");
  return field_to_flow(-backward_error(x));
}

}  // namespace lbk
