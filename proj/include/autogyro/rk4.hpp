#pragma once

namespace autogyro {

// Classical fixed-step Runge-Kutta. f(t, y) returns dy/dt.
template <class Vec, class F>
Vec rk4_step(F&& f, double t, const Vec& y, double h)
{
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * h, Vec(y + (0.5 * h) * k1));
    const Vec k3 = f(t + 0.5 * h, Vec(y + (0.5 * h) * k2));
    const Vec k4 = f(t + h, Vec(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace autogyro
