#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perco/rng.hpp"

namespace perco {

/// Row-major grey values in [0, 1], top row first.
class GrayImage {
public:
    /// Throws ShapeError on a size mismatch and InvalidArgument for values
    /// outside [0, 1] (NaN included).
    GrayImage(std::size_t rows, std::size_t cols, std::vector<double> intensities);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> intensities() const noexcept { return values_; }
    double at(std::size_t row, std::size_t col) const { return values_.at(row * cols_ + col); }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

/// Row-major activity flags, each exactly 0 or 1.
class BinaryImage {
public:
    BinaryImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> active);
    static BinaryImage filled(std::size_t rows, std::size_t cols, bool active);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return active_.size(); }
    std::span<const std::uint8_t> active() const noexcept { return active_; }
    bool is_active(std::size_t site) const noexcept { return active_[site] != 0; }
    std::size_t active_count() const noexcept;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> active_;
};

enum class GrayFormat { PgmAscii, PgmBinary };
enum class ThresholdDirection { ActiveIfGeq, ActiveIfLt };

/// Parses P2 or P5 data, picking the encoding from the magic number.
/// Samples are scaled by 1/maxval. Throws ParseError.
GrayImage load_gray(std::string_view bytes);

/// Writes P2/P5 with the given maxval; intensities are rounded to the
/// nearest level.
std::string save_gray(const GrayImage& image, GrayFormat format, std::uint16_t maxval = 255);

/// Parses P1 or P4 data. Throws ParseError.
BinaryImage load_binary(std::string_view bytes);

/// Plain PBM (P1): header "P1\n<cols> <rows>\n", one line per image row
/// (wrapped at 70 characters), 1 = active.
std::string save_binary(const BinaryImage& image);

/// Active iff intensity >= tau (ActiveIfGeq, ties are active) or
/// intensity < tau (ActiveIfLt). Throws InvalidArgument for tau outside [0,1].
BinaryImage threshold(const GrayImage& image, double tau,
                      ThresholdDirection direction = ThresholdDirection::ActiveIfGeq);

/// Independent site percolation: each site active with probability p, drawn
/// in row-major order from `rng`.
BinaryImage generate_percolation(double p, std::size_t rows, std::size_t cols, RngStream& rng);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace perco
