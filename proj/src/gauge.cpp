#include "mab/gauge.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mab/types.hpp"

namespace mab {

GaugeSpec::GaugeSpec(double a0, std::vector<double> c, std::vector<double> s, double linear,
                     std::string label)
    : a0_(a0), cos_(std::move(c)), sin_(std::move(s)), linear_(linear), label_(std::move(label)) {
    if (!std::isfinite(a0_) || !std::isfinite(linear_))
        throw DomainError("gauge coefficients must be finite");
    const std::size_t n = std::max(cos_.size(), sin_.size());
    if (n > kMaxHarmonics)
        throw DomainError("gauge has " + std::to_string(n) + " harmonics; at most 64 are allowed");
    cos_.resize(n, 0.0);
    sin_.resize(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(cos_[i]) || !std::isfinite(sin_[i]))
            throw DomainError("gauge coefficients must be finite");
}

GaugeSpec GaugeSpec::zero() { return GaugeSpec(0.0, {}, {}, 0.0, "zero"); }

GaugeSpec GaugeSpec::single_valued(double xi) { return GaugeSpec(0.0, {}, {}, xi, "single_valued"); }

GaugeSpec GaugeSpec::fourier(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                             double linear) {
    return GaugeSpec(a0, std::move(cos_coeffs), std::move(sin_coeffs), linear, "fourier");
}

double GaugeSpec::alpha(double theta) const {
    double value = a0_ + linear_ * theta;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        value += cos_[i] * std::cos(n * theta) + sin_[i] * std::sin(n * theta);
    }
    return value;
}

double GaugeSpec::alpha_prime(double theta) const {
    double value = linear_;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        value += n * (sin_[i] * std::cos(n * theta) - cos_[i] * std::sin(n * theta));
    }
    return value;
}

namespace {

double parse_number(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw DomainError("bad gauge coefficient '" + std::string(text) + "'");
    return value;
}

}  // namespace

GaugeSpec GaugeSpec::parse(const std::string& text, double xi) {
    if (text == "zero") return zero();
    if (text == "single" || text == "single_valued") return single_valued(xi);
    const std::string prefix = "fourier:";
    if (text.rfind(prefix, 0) != 0)
        throw DomainError("unknown gauge '" + text + "' (expected zero, single, or fourier:...)");

    double a0 = 0.0, linear = 0.0;
    std::vector<double> c, s;
    std::stringstream items(text.substr(prefix.size()));
    std::string item;
    while (std::getline(items, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw DomainError("bad gauge term '" + item + "'");
        const std::string key = item.substr(0, eq);
        const double value = parse_number(std::string_view(item).substr(eq + 1));
        if (key == "a0") {
            a0 = value;
        } else if (key == "c") {
            linear = value;
        } else if ((key[0] == 'a' || key[0] == 'b') && key.size() > 1) {
            int n = 0;
            auto [ptr, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), n);
            if (ec != std::errc() || ptr != key.data() + key.size() || n < 1 ||
                n > static_cast<int>(kMaxHarmonics))
                throw DomainError("bad gauge harmonic '" + key + "'");
            auto& target = key[0] == 'a' ? c : s;
            if (target.size() < static_cast<std::size_t>(n)) target.resize(n, 0.0);
            target[n - 1] = value;
        } else {
            throw DomainError("unknown gauge key '" + key + "'");
        }
    }
    return fourier(a0, std::move(c), std::move(s), linear);
}

}  // namespace mab
