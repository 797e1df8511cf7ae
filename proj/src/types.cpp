// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/types.hpp>

#include <cctype>
#include <cstdio>
#include <numeric>

namespace fruitpool {

std::string Digest::hex() const
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return buf;
}

bool matches(const Fruit& object, const Instance& inst)
{
    return object.h_prev == inst.h_prev && object.h_f == inst.h_f && object.dig == inst.dig && object.m == inst.m;
}

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Exact value of a decimal literal like "12.5e-3".
mpq_class parse_decimal(const std::string& text)
{
    std::string s = trim(text);
    if (s.empty()) throw ConfigError("empty number");
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    long frac = 0;
    bool seen_point = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) ++frac;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ConfigError("malformed number '" + text + "'");
    long exp10 = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw ConfigError("malformed number '" + text + "'");
        ++i;
        std::size_t used = 0;
        try {
            exp10 = std::stol(s.substr(i), &used);
        } catch (const std::exception&) {
            throw ConfigError("malformed exponent in '" + text + "'");
        }
        if (i + used != s.size()) throw ConfigError("malformed number '" + text + "'");
    }
    mpz_class num(digits, 10);
    long shift = exp10 - frac;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    mpq_class v = shift >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
    v.canonicalize();
    return neg ? mpq_class(-v) : v;
}

} // namespace

Amount parse_amount(const std::string& text)
{
    std::string s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    mpq_class a = parse_decimal(s.substr(0, slash));
    mpq_class b = parse_decimal(s.substr(slash + 1));
    if (b == 0) throw ConfigError("zero denominator in '" + text + "'");
    mpq_class v = a / b;
    v.canonicalize();
    return v;
}

std::string amount_str(const Amount& a) { return a.get_str(); }

double amount_double(const Amount& a) { return a.get_d(); }

Probability Probability::parse(const std::string& text)
{
    mpq_class v = parse_amount(text);
    if (v < 0 || v > 1) throw ConfigError("probability out of [0,1]: '" + text + "'");
    if (!v.get_num().fits_ulong_p() || !v.get_den().fits_ulong_p())
        throw ConfigError("probability has too many digits: '" + text + "'");
    return Probability{v.get_num().get_ui(), v.get_den().get_ui()};
}

Probability Probability::from_double(double value)
{
    if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("probability out of [0,1]");
    mpq_class v(value);
    v.canonicalize();
    return Probability{v.get_num().get_ui(), v.get_den().get_ui()};
}

std::string Probability::str() const
{
    return std::to_string(num) + "/" + std::to_string(den);
}

std::uint64_t Probability::threshold(unsigned kappa) const
{
    unsigned __int128 scaled = static_cast<unsigned __int128>(num) << kappa;
    return static_cast<std::uint64_t>(scaled / den);
}

void ProtocolParams::validate() const
{
    if (kappa_sim < 2 || kappa_sim > 60) throw ConfigError("kappa_sim must be in [2, 60]");
    if (n < 1) throw ConfigError("n must be at least 1");
    if (q < 1) throw ConfigError("q must be at least 1");
    if (big_n < 1) throw ConfigError("N must be at least 1");
    if (r < 1) throw ConfigError("r must be at least 1");
    if (p_f.den == 0 || p_b.den == 0) throw ConfigError("zero probability denominator");
    if (p_f.num > p_f.den || p_b.num > p_b.den) throw ConfigError("probability above 1");
    if (reward_f < 0) throw ConfigError("R_f must be non-negative");
    for (const Amount* c : {&costs.lc, &costs.fs, &costs.tx, &costs.ro, &costs.ltx})
        if (*c < 0) throw ConfigError("oracle costs must be non-negative");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
}

} // namespace fruitpool
