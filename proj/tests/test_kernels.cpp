#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "netprop/kernels.hpp"
#include "oracle.hpp"

using netprop::kernels::Ops;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = value(rng);
  return v;
}

std::vector<const Ops*> implementations() {
  std::vector<const Ops*> impls = {&netprop::kernels::scalar()};
  if (netprop::kernels::avx2() != nullptr) impls.push_back(netprop::kernels::avx2());
  impls.push_back(&netprop::kernels::active());
  return impls;
}

// Sizes straddling the 4-lane vector width, including empty and tails.
const std::vector<std::size_t> kSizes = {0, 1, 3, 4, 5, 7, 8, 17, 64, 255, 1000};

}  // namespace

TEST_CASE("reduction kernels agree across implementations") {
  for (const Ops* impl : implementations()) {
    CAPTURE(impl->name);
    for (const std::size_t n : kSizes) {
      const auto x = random_vec(n, 11 + n);
      const auto y = random_vec(n, 23 + n);

      double dot_ref = 0.0, ssd_ref = 0.0, mad_ref = 0.0, abs_sum = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        dot_ref += x[i] * y[i];
        const double d = x[i] - y[i];
        ssd_ref += d * d;
        mad_ref = std::max(mad_ref, std::fabs(d));
        abs_sum += std::fabs(x[i] * y[i]);
      }

      CHECK(impl->dot(n, x.data(), y.data()) ==
            doctest::Approx(dot_ref).epsilon(1e-14).scale(abs_sum));
      CHECK(impl->sum_sq_diff(n, x.data(), y.data()) ==
            doctest::Approx(ssd_ref).epsilon(1e-14).scale(ssd_ref + 1.0));
      // max is exact arithmetic, so every implementation matches bitwise
      CHECK(impl->max_abs_diff(n, x.data(), y.data()) == mad_ref);
    }
  }
}

TEST_CASE("vector update kernels agree across implementations") {
  for (const Ops* impl : implementations()) {
    CAPTURE(impl->name);
    for (const std::size_t n : kSizes) {
      const auto x = random_vec(n, 31 + n);
      const auto y0 = random_vec(n, 47 + n);

      std::vector<double> y = y0;
      impl->axpy(n, 0.75, x.data(), y.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(y[i] == doctest::Approx(y0[i] + 0.75 * x[i]).epsilon(1e-15));
      }

      y = y0;
      impl->xpay(n, x.data(), -0.3, y.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(y[i] == doctest::Approx(x[i] - 0.3 * y0[i]).epsilon(1e-15));
      }

      std::vector<double> out(n, 0.0);
      impl->axpby(n, 0.4, x.data(), 0.6, y0.data(), out.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(out[i] == doctest::Approx(0.4 * x[i] + 0.6 * y0[i]).epsilon(1e-15));
      }

      // aliased output is part of the contract
      std::vector<double> aliased = y0;
      impl->axpby(n, 0.4, x.data(), 0.6, aliased.data(), aliased.data());
      CHECK(impl->max_abs_diff(n, aliased.data(), out.data()) == 0.0);
    }
  }
}

TEST_CASE("csr kernels match the dense oracle") {
  oracle::Rng rng(2024);
  for (const netprop::index_t n : {1, 2, 7, 23, 50}) {
    const netprop::SparseNetwork net = oracle::random_network(n, 0.3, rng, false);
    const netprop::CsrMatrix& a = net.adjacency();
    const oracle::Dense dense = oracle::densify(a);

    for (const Ops* impl : implementations()) {
      CAPTURE(impl->name);
      const auto x = random_vec(static_cast<std::size_t>(n), 91 + n);
      std::vector<double> got(static_cast<std::size_t>(n), 0.0);
      impl->csr_matvec(static_cast<std::size_t>(n), a.row_ptr.data(), a.col.data(),
                       a.val.data(), x.data(), got.data());
      for (netprop::index_t i = 0; i < n; ++i) {
        double want = 0.0;
        for (netprop::index_t j = 0; j < n; ++j) want += dense.at(i, j) * x[j];
        CHECK(got[i] == doctest::Approx(want).epsilon(1e-12).scale(1.0));
      }

      for (const std::size_t c : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{6}}) {
        const auto xm = random_vec(static_cast<std::size_t>(n) * c, 7 * n + c);
        std::vector<double> out(static_cast<std::size_t>(n) * c, 0.0);
        impl->csr_matmat(static_cast<std::size_t>(n), a.row_ptr.data(), a.col.data(),
                         a.val.data(), c, xm.data(), out.data());
        for (netprop::index_t i = 0; i < n; ++i) {
          for (std::size_t l = 0; l < c; ++l) {
            double want = 0.0;
            for (netprop::index_t j = 0; j < n; ++j) {
              want += dense.at(i, j) * xm[static_cast<std::size_t>(j) * c + l];
            }
            CHECK(out[static_cast<std::size_t>(i) * c + l] ==
                  doctest::Approx(want).epsilon(1e-12).scale(1.0));
          }
        }
      }
    }
  }
}

TEST_CASE("runtime dispatch exposes a working implementation") {
  const Ops& impl = netprop::kernels::active();
  CHECK(impl.dot != nullptr);
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const std::vector<double> y = {4.0, 5.0, 6.0};
  CHECK(impl.dot(3, x.data(), y.data()) == doctest::Approx(32.0));
}
