#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <string>
#include <utility>

namespace interchange {

// Owning wrapper around an mpfr_t with a fixed precision.
class BigFloat {
 public:
  explicit BigFloat(long precision_bits) { mpfr_init2(value_, precision_bits); mpfr_set_zero(value_, 1); }
  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept : BigFloat(MPFR_PREC_MIN) { mpfr_swap(value_, other.value_); }
  BigFloat& operator=(BigFloat other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(value_); }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  long precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }

  std::string to_string(int digits = 40) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, value_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

 private:
  mpfr_t value_;
};

}  // namespace interchange
