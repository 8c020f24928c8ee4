#include "etalab/bernoulli.hpp"

#include <mutex>

namespace etalab {
namespace {

// Tangent numbers T_1..T_n (Brent and Harvey, in-place recurrence).
std::vector<mpz_class> tangent_numbers(std::size_t n) {
    std::vector<mpz_class> t(n + 1);
    if (n == 0) {
        return t;
    }
    t[1] = 1;
    for (std::size_t k = 2; k <= n; ++k) {
        t[k] = t[k - 1] * static_cast<unsigned long>(k - 1);
    }
    for (std::size_t k = 2; k <= n; ++k) {
        for (std::size_t j = k; j <= n; ++j) {
            t[j] = t[j - 1] * static_cast<unsigned long>(j - k) + t[j] * static_cast<unsigned long>(j - k + 2);
        }
    }
    return t;
}

std::mutex g_mutex;
std::shared_ptr<const std::vector<mpq_class>> g_table;

}  // namespace

std::shared_ptr<const std::vector<mpq_class>> bernoulli_even(std::size_t count) {
    std::lock_guard lock(g_mutex);
    if (g_table && g_table->size() >= count) {
        return g_table;
    }
    const std::size_t n = std::max<std::size_t>(count, g_table ? 2 * g_table->size() : 16);
    const auto t = tangent_numbers(n);
    auto table = std::make_shared<std::vector<mpq_class>>();
    table->reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        // B_{2k} = (-1)^(k-1) 2k T_k / (2^(2k) (2^(2k) - 1))
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, 2 * k);
        mpq_class b(t[k] * static_cast<unsigned long>(2 * k), p2 * (p2 - 1));
        b.canonicalize();
        if (k % 2 == 0) {
            b = -b;
        }
        table->push_back(std::move(b));
    }
    g_table = std::move(table);
    return g_table;
}

Ball bernoulli(unsigned n, Prec prec) {
    if (n == 0) {
        return Ball(1, prec);
    }
    if (n == 1) {
        return Ball::from_mpq(mpq_class(-1, 2), prec);
    }
    if (n % 2 == 1) {
        return Ball(0, prec);
    }
    const auto table = bernoulli_even(n / 2);
    return Ball::from_mpq((*table)[n / 2 - 1], prec);
}

}  // namespace etalab
