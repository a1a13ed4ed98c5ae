#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace splitree {

//! One fair coin per entry: 0 is a tail, 1 is a head.
using Bits = std::vector<std::uint8_t>;

//! Supplies the coin tosses for one trial.
//!
//! A seeded source is a pure function of (seed, stream): a SplitMix64
//! sequence started from a hash of both. Trial t of a batch uses stream t, so batches give identical per-trial results whatever order
//! the trials run in. A scripted source replays fixed toss vectors, one per
//! split, and insists the vector length matches the group being split.
//! A keyed source gives item i at tree depth d a coin that depends only on
//! (seed, i, d); two algorithms driven by keyed sources with the same seed
//! see the same coins at the same tree positions.
class CoinSource {
public:
    static CoinSource seeded(std::uint64_t seed, std::uint64_t stream = 0);
    static CoinSource scripted(std::vector<Bits> script);
    static CoinSource keyed(std::uint64_t seed);

    //! Tosses one coin per member of a group at the given depth (root = 0).
    //! Keyed sources use items and depth, the other modes only the size.
    void split(std::span<const int> items, std::size_t depth, std::span<std::uint8_t> out);

    //! Tosses m coins.
    Bits next_bits(std::size_t m);

    //! Tosses out.size() coins into \p out.
    void fill_bits(std::span<std::uint8_t> out);

    bool is_scripted() const noexcept { return m_Scripted; }
    bool is_keyed() const noexcept { return m_Keyed; }

    //! Number of script vectors not yet consumed (zero for seeded sources).
    std::size_t remaining() const noexcept;

private:
    CoinSource() = default;

    bool next_random_bit();

private:
    bool m_Scripted{false};
    bool m_Keyed{false};
    std::uint64_t m_Seed{0};
    std::uint64_t m_State{0}; //!< SplitMix64 counter
    std::uint64_t m_Word{0};
    unsigned m_BitsLeft{0};
    std::vector<Bits> m_Script;
    std::size_t m_Cursor{0};
};

} // namespace splitree
