#pragma once
// Pointwise products and combinators on grid fields.
#include "hpn/grid.hpp"

namespace hpn::pw {

Field mul(const Field& a, const Field& b);           // scalar * scalar (quaternion product)
Field real_times(const Field& r, const Field& s);    // real * scalar
Field comm(const Field& a, const Field& b);          // C(a,b), scalar fields
Field acomm(const Field& a, const Field& b);         // A(a,b) = 2 Re(ab) -> real
Field vcomm(const Field& a, const Field& b);         // C(a,b), vector fields -> imag
Field vacomm(const Field& a, const Field& b);        // A(a,b), vector fields -> real
Field vinner(const Field& a, const Field& b);        // <a,b> -> quat
Field norm2(const Field& v);                         // |v|^2 -> real
Field matcomm(const Field& a, const Field& b);       // bold C(a,b) -> matrix
Field lmul(const Field& s, const Field& v);          // s v (scalar or real field times vector field)
Field rmul(const Field& v, const Field& s);          // v s
Field vmat(const Field& v, const Field& M);          // row vector times matrix
Field as_quat(const Field& r);                       // real -> quat kind, same values
Field re_part(const Field& q);                       // real parts of a scalar field

}  // namespace hpn::pw
