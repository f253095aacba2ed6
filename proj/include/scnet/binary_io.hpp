// SPDX-License-Identifier: Apache-2.0
//
// scnet - complex-valued downlink CSI prediction for FDD massive MIMO
// Copyright (C) 2026 The scnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <iterator>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scnet/error.hpp"

namespace scnet::io {

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559,
              "binary formats assume IEEE-754 binary64");

inline void write_file(const std::string& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::vector<char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Little-endian byte sink backed by a growable buffer.
class Writer {
public:
    void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }

    void u32(std::uint32_t v) { put(v); }
    void u64(std::uint64_t v) { put(v); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }

    void complex(std::complex<double> z) {
        f64(z.real());
        f64(z.imag());
    }

    const std::vector<char>& bytes() const noexcept { return bytes_; }

private:
    template <class U>
    void put(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }

    std::vector<char> bytes_;
};

/// Little-endian cursor over a file image. Reads past the end throw TruncatedFileError.
class Reader {
public:
    explicit Reader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

    /// Throws BadMagicError unless the next bytes equal `expected`.
    void expect_magic(std::string_view expected) {
        if (remaining() < expected.size() ||
            std::memcmp(bytes_.data() + pos_, expected.data(), expected.size()) != 0)
            throw BadMagicError("bad magic: expected '" + std::string(expected) + "'");
        pos_ += expected.size();
    }

    std::uint32_t u32() { return get<std::uint32_t>(); }
    std::uint64_t u64() { return get<std::uint64_t>(); }
    double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }

    std::complex<double> complex() {
        const double re = f64();
        const double im = f64();
        return {re, im};
    }

    /// Fails early when a header-declared payload cannot fit in the rest of the file.
    void require(std::uint64_t n, std::string_view what) const {
        if (n > remaining())
            throw TruncatedFileError("truncated " + std::string(what) + ": need " + std::to_string(n) +
                                     " bytes, have " + std::to_string(remaining()));
    }

    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    template <class U>
    U get() {
        require(sizeof(U), "field");
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += sizeof(U);
        return v;
    }

    std::vector<char> bytes_;
    std::size_t pos_ = 0;
};

} // namespace scnet::io
