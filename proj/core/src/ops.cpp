#include "ops.hpp"

#include <cmath>
#include <cstdint>

namespace reqc::ops {

namespace {

bool both_int(const Value& a, const Value& b) { return a.is_int() && b.is_int(); }

template <typename F>
Value checked(F op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (op(a, b, &r)) throw Fault("integer overflow");
  return Value::integer(r);
}

template <typename IntCmp, typename FloatCmp>
Value compare(const Value& a, const Value& b, IntCmp ic, FloatCmp fc) {
  if (both_int(a, b)) return Value::boolean(ic(a.as_int(), b.as_int()));
  return Value::boolean(fc(a.to_double(), b.to_double()));
}

}  // namespace

Value apply(Op op, const Value* args) {
  const Value& a = args[0];
  switch (op) {
    case Op::Not: return Value::boolean(!a.as_bool());
    case Op::And: return Value::boolean(a.as_bool() && args[1].as_bool());
    case Op::Or: return Value::boolean(a.as_bool() || args[1].as_bool());
    case Op::Implies: return Value::boolean(!a.as_bool() || args[1].as_bool());
    case Op::Eq:
      if (a.is_bool()) return Value::boolean(a.as_bool() == args[1].as_bool());
      return compare(a, args[1], [](auto x, auto y) { return x == y; }, [](auto x, auto y) { return x == y; });
    case Op::Lt: return compare(a, args[1], [](auto x, auto y) { return x < y; }, [](auto x, auto y) { return x < y; });
    case Op::Le: return compare(a, args[1], [](auto x, auto y) { return x <= y; }, [](auto x, auto y) { return x <= y; });
    case Op::Gt: return compare(a, args[1], [](auto x, auto y) { return x > y; }, [](auto x, auto y) { return x > y; });
    case Op::Ge: return compare(a, args[1], [](auto x, auto y) { return x >= y; }, [](auto x, auto y) { return x >= y; });
    case Op::Add: {
      const Value& b = args[1];
      if (both_int(a, b)) {
        return checked([](std::int64_t x, std::int64_t y, std::int64_t* r) { return __builtin_add_overflow(x, y, r); },
                       a.as_int(), b.as_int());
      }
      return Value::real(a.to_double() + b.to_double());
    }
    case Op::Sub: {
      const Value& b = args[1];
      if (both_int(a, b)) {
        return checked([](std::int64_t x, std::int64_t y, std::int64_t* r) { return __builtin_sub_overflow(x, y, r); },
                       a.as_int(), b.as_int());
      }
      return Value::real(a.to_double() - b.to_double());
    }
    case Op::Mul: {
      const Value& b = args[1];
      if (both_int(a, b)) {
        return checked([](std::int64_t x, std::int64_t y, std::int64_t* r) { return __builtin_mul_overflow(x, y, r); },
                       a.as_int(), b.as_int());
      }
      return Value::real(a.to_double() * b.to_double());
    }
    case Op::Div: {
      const Value& b = args[1];
      if (b.to_double() == 0.0) throw Fault("division by zero");
      if (both_int(a, b)) {
        if (a.as_int() == INT64_MIN && b.as_int() == -1) throw Fault("integer overflow");
        return Value::integer(a.as_int() / b.as_int());
      }
      return Value::real(a.to_double() / b.to_double());
    }
    case Op::Plus: return a;
    case Op::Neg:
      if (a.is_int()) {
        if (a.as_int() == INT64_MIN) throw Fault("integer overflow");
        return Value::integer(-a.as_int());
      }
      return Value::real(-a.as_float());
    case Op::Abs:
      if (a.is_int()) {
        if (a.as_int() == INT64_MIN) throw Fault("integer overflow");
        return Value::integer(a.as_int() < 0 ? -a.as_int() : a.as_int());
      }
      return Value::real(std::fabs(a.as_float()));
    case Op::Min:
    case Op::Max: {
      const Value& b = args[1];
      bool take_a;
      if (both_int(a, b)) {
        take_a = op == Op::Min ? a.as_int() <= b.as_int() : a.as_int() >= b.as_int();
        return take_a ? a : b;
      }
      double x = a.to_double(), y = b.to_double();
      return Value::real(op == Op::Min ? std::fmin(x, y) : std::fmax(x, y));
    }
    case Op::ExtractBit: {
      std::int64_t i = a.as_int();
      if (i < 0 || i > 63) throw Fault("bit index " + std::to_string(i) + " outside 0..63");
      auto bits = static_cast<std::uint64_t>(args[1].as_int());
      return Value::boolean(((bits >> i) & 1U) != 0);
    }
    default:
      throw Fault("operator '" + std::string(op_name(op)) + "' cannot be applied directly");
  }
}

}  // namespace reqc::ops
