// GF(5^3) arithmetic and a Frobenius check.
#include <iostream>
#include <random>

#include "cachecode/finite_field.hpp"

int main() {
  namespace cc = cachecode;
  const auto F = cc::make_prime_field(5);
  const auto E = cc::ExtField::with_degree(F, 3, 7);
  std::mt19937_64 rng(3);
  const auto a = E.random(rng);
  const auto b = E.random(rng);
  std::cout << "a = " << E.to_hex(a) << ", b = " << E.to_hex(b) << '\n';
  std::cout << "a*b = " << E.to_hex(E.mul(a, b)) << ", a/b = " << E.to_hex(E.div(a, b)) << '\n';
  std::cout << "a^(5^3) == a: " << std::boolalpha << (E.pow(a, 125) == a) << '\n';
  std::cout << "frob(a+b) == frob(a)+frob(b): "
            << (E.frobenius(E.add(a, b), 1) == E.add(E.frobenius(a, 1), E.frobenius(b, 1))) << '\n';
}
