#include "splitree/coin_source.hpp"

#include "splitree/errors.hpp"

#include <algorithm>
#include <string>

namespace splitree {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // unnamed::

CoinSource CoinSource::seeded(std::uint64_t seed, std::uint64_t stream) {
    CoinSource source;
    source.m_State = splitmix64(splitmix64(seed) ^ splitmix64(~stream));
    return source;
}

CoinSource CoinSource::scripted(std::vector<Bits> script) {
    for (const auto& vector : script) {
        if (std::any_of(vector.begin(), vector.end(), [](std::uint8_t b) { return b > 1; })) {
            throw Error{ErrorCode::InvalidArgument, "script bits must be 0 or 1"};
        }
    }
    CoinSource source;
    source.m_Scripted = true;
    source.m_Script = std::move(script);
    return source;
}

CoinSource CoinSource::keyed(std::uint64_t seed) {
    CoinSource source;
    source.m_Keyed = true;
    source.m_Seed = seed;
    return source;
}


void CoinSource::split(std::span<const int> items, std::size_t depth, std::span<std::uint8_t> out) {
    if (items.size() != out.size()) {
        throw Error{ErrorCode::InvalidArgument, "one coin per item is required"};
    }
    if (!m_Keyed) {
        this->fill_bits(out);
        return;
    }
    std::uint64_t level = splitmix64(m_Seed ^ splitmix64(depth));
    for (std::size_t i = 0; i < items.size(); ++i) {
        out[i] = splitmix64(level + static_cast<std::uint64_t>(items[i])) & 1U;
    }
}

Bits CoinSource::next_bits(std::size_t m) {
    Bits result(m);
    this->fill_bits(result);
    return result;
}

void CoinSource::fill_bits(std::span<std::uint8_t> out) {
    if (out.empty()) {
        return;
    }
    if (m_Scripted) {
        if (m_Cursor >= m_Script.size()) {
            throw Error{ErrorCode::ScriptExhausted,
                        "coin script exhausted after " + std::to_string(m_Script.size()) +
                            " splits"};
        }
        const auto& vector = m_Script[m_Cursor];
        if (vector.size() != out.size()) {
            throw Error{ErrorCode::ScriptLengthMismatch,
                        "script vector " + std::to_string(m_Cursor) + " has " +
                            std::to_string(vector.size()) + " bits but the group has " +
                            std::to_string(out.size()) + " members"};
        }
        std::copy(vector.begin(), vector.end(), out.begin());
        ++m_Cursor;
        return;
    }
    if (m_Keyed) {
        throw Error{ErrorCode::InvalidArgument, "keyed coin sources toss through split()"};
    }
    for (auto& bit : out) {
        bit = this->next_random_bit() ? 1 : 0;
    }
}

std::size_t CoinSource::remaining() const noexcept {
    return m_Scripted ? m_Script.size() - m_Cursor : 0;
}

bool CoinSource::next_random_bit() {
    if (m_BitsLeft == 0) {
        m_State += 0x9e3779b97f4a7c15ULL;
        m_Word = splitmix64(m_State);
        m_BitsLeft = 64;
    }
    bool bit = (m_Word & 1U) != 0;
    m_Word >>= 1;
    --m_BitsLeft;
    return bit;
}

} // namespace splitree
