#pragma once

#include <array>
#include <cstddef>

namespace cohom1 {

// Runge-Kutta-Fehlberg 7(8). Coefficients as in boost::numeric::odeint's
// runge_kutta_fehlberg78; the 8th order solution is propagated.
template <class T, std::size_t N>
struct Rkf78 {
  using State = std::array<T, N>;

  // f(const State& y, State& dydx) for an autonomous system
  template <class F>
  static void step(F& f, const State& y, const State& k0, T h, State& out, State& err) {
    static const T a[13][12] = {
        {},
        {T(2) / 27},
        {T(1) / 36, T(1) / 12},
        {T(1) / 24, 0, T(1) / 8},
        {T(5) / 12, 0, T(-25) / 16, T(25) / 16},
        {T(1) / 20, 0, 0, T(1) / 4, T(1) / 5},
        {T(-25) / 108, 0, 0, T(125) / 108, T(-65) / 27, T(125) / 54},
        {T(31) / 300, 0, 0, 0, T(61) / 225, T(-2) / 9, T(13) / 900},
        {T(2), 0, 0, T(-53) / 6, T(704) / 45, T(-107) / 9, T(67) / 90, T(3)},
        {T(-91) / 108, 0, 0, T(23) / 108, T(-976) / 135, T(311) / 54, T(-19) / 60, T(17) / 6,
         T(-1) / 12},
        {T(2383) / 4100, 0, 0, T(-341) / 164, T(4496) / 1025, T(-301) / 82, T(2133) / 4100,
         T(45) / 82, T(45) / 164, T(18) / 41},
        {T(3) / 205, 0, 0, 0, 0, T(-6) / 41, T(-3) / 205, T(-3) / 41, T(3) / 41, T(6) / 41, 0},
        {T(-1777) / 4100, 0, 0, T(-341) / 164, T(4496) / 1025, T(-289) / 82, T(2193) / 4100,
         T(51) / 82, T(33) / 164, T(12) / 41, 0, T(1)}};
    static const T b[13] = {0,         0,         0,          0,          0,          T(34) / 105, T(9) / 35,
                            T(9) / 35, T(9) / 280, T(9) / 280, 0,          T(41) / 840, T(41) / 840};

    std::array<State, 13> k;
    k[0] = k0;
    State tmp;
    for (int s = 1; s < 13; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        T acc = 0;
        for (int j = 0; j < s; ++j) acc += a[s][j] * k[j][i];
        tmp[i] = y[i] + h * acc;
      }
      f(tmp, k[s]);
    }
    const T e = T(41) / 840;
    for (std::size_t i = 0; i < N; ++i) {
      T acc = 0;
      for (int s = 5; s < 13; ++s) acc += b[s] * k[s][i];
      out[i] = y[i] + h * acc;
      err[i] = h * e * (k[0][i] + k[10][i] - k[11][i] - k[12][i]);
    }
  }
};

}  // namespace cohom1
