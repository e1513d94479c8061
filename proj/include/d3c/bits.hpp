#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "d3c/error.hpp"

namespace d3c {

/// A bit string of explicit length, stored MSB-first in bytes. Bits past
/// bit_length() in the last byte are always zero, so byte-wise equality and
/// XOR are exact.
class Bits {
public:
    Bits() = default;

    explicit Bits(std::uint64_t bit_length)
        : bytes_((bit_length + 7) / 8, 0), bit_length_(bit_length) {}

    Bits(std::span<const std::uint8_t> bytes, std::uint64_t bit_length)
        : bytes_(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>((bit_length + 7) / 8)),
          bit_length_(bit_length) {
        if (bytes.size() * 8 < bit_length) throw InvalidParameter("Bits: byte buffer shorter than bit length");
        clear_tail();
    }

    std::uint64_t bit_length() const noexcept { return bit_length_; }
    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

    bool get(std::uint64_t i) const noexcept { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1U; }

    void set(std::uint64_t i, bool v) noexcept {
        auto mask = static_cast<std::uint8_t>(1U << (7 - (i & 7)));
        if (v)
            bytes_[i >> 3] |= mask;
        else
            bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }

    /// Copy of bits [offset, offset + length).
    Bits slice(std::uint64_t offset, std::uint64_t length) const {
        if (offset + length > bit_length_) throw InvalidParameter("Bits::slice out of range");
        Bits out(length);
        if ((offset & 7) == 0) {
            std::size_t first = offset >> 3;
            for (std::size_t b = 0; b < out.bytes_.size(); ++b) out.bytes_[b] = bytes_[first + b];
            out.clear_tail();
            return out;
        }
        for (std::uint64_t i = 0; i < length; ++i) out.set(i, get(offset + i));
        return out;
    }

    void append(const Bits& other) {
        std::uint64_t old = bit_length_;
        bit_length_ += other.bit_length_;
        bytes_.resize((bit_length_ + 7) / 8, 0);
        if ((old & 7) == 0) {
            std::size_t first = old >> 3;
            for (std::size_t b = 0; b < other.bytes_.size(); ++b) bytes_[first + b] = other.bytes_[b];
            return;
        }
        for (std::uint64_t i = 0; i < other.bit_length_; ++i) set(old + i, other.get(i));
    }

    Bits& operator^=(const Bits& other) {
        if (other.bit_length_ != bit_length_) throw InvalidParameter("Bits XOR of unequal lengths");
        for (std::size_t b = 0; b < bytes_.size(); ++b) bytes_[b] ^= other.bytes_[b];
        return *this;
    }

    friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
    friend bool operator==(const Bits&, const Bits&) = default;

    std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(bytes_.size() * 2);
        for (auto b : bytes_) {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 15]);
        }
        return out;
    }

private:
    void clear_tail() noexcept {
        if (auto rem = bit_length_ & 7; rem != 0)
            bytes_.back() &= static_cast<std::uint8_t>(0xFFU << (8 - rem));
    }

    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_length_ = 0;
};

inline Bits concat(std::span<const Bits> parts) {
    Bits out;
    for (const auto& p : parts) out.append(p);
    return out;
}

namespace hashing {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Streaming 64-bit digest (FNV-style absorb, splitmix finalize).
class Digest {
public:
    explicit Digest(std::uint64_t key = 0) : state_(0xcbf29ce484222325ULL ^ splitmix64(key)) {}

    Digest& absorb(std::uint64_t word) noexcept {
        state_ = splitmix64(state_ ^ word) * 0x100000001b3ULL;
        return *this;
    }
    Digest& absorb(std::span<const std::uint8_t> bytes) noexcept {
        std::uint64_t word = 0;
        std::size_t n = 0;
        for (auto b : bytes) {
            word = (word << 8) | b;
            if (++n == 8) {
                absorb(word);
                word = 0;
                n = 0;
            }
        }
        absorb(word ^ (static_cast<std::uint64_t>(n) << 56));
        return absorb(static_cast<std::uint64_t>(bytes.size()));
    }
    Digest& absorb(const Bits& bits) noexcept {
        absorb(bits.bit_length());
        return absorb(bits.bytes());
    }

    std::uint64_t value() const noexcept { return splitmix64(state_); }

    /// Expands the digest to an arbitrary number of bits (counter mode).
    Bits expand(std::uint64_t bit_length) const {
        Bits out(bit_length);
        std::vector<std::uint8_t> buf((bit_length + 7) / 8);
        std::uint64_t seed = value();
        for (std::size_t b = 0; b < buf.size(); b += 8) {
            std::uint64_t w = splitmix64(seed + b);
            for (std::size_t i = 0; i < 8 && b + i < buf.size(); ++i)
                buf[b + i] = static_cast<std::uint8_t>(w >> (56 - 8 * i));
        }
        return Bits(buf, bit_length);
    }

private:
    std::uint64_t state_;
};

inline std::string digest_hex(const Bits& bits) {
    static constexpr char digits[] = "0123456789abcdef";
    std::uint64_t v = Digest(0).absorb(bits).value();
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
    return out;
}

} // namespace hashing
} // namespace d3c
