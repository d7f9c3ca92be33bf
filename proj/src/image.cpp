#include "perco/image.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include "perco/errors.hpp"

namespace perco {

GrayImage::GrayImage(std::size_t rows, std::size_t cols, std::vector<double> intensities)
    : rows_(rows), cols_(cols), values_(std::move(intensities)) {
    if (cols != 0 && rows > std::numeric_limits<std::size_t>::max() / cols)
        throw ShapeError("image dimensions overflow");
    if (values_.size() != rows * cols)
        throw ShapeError("gray image has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    for (double v : values_)
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("gray intensity outside [0,1]");
}

BinaryImage::BinaryImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> active)
    : rows_(rows), cols_(cols), active_(std::move(active)) {
    if (cols != 0 && rows > std::numeric_limits<std::size_t>::max() / cols)
        throw ShapeError("image dimensions overflow");
    if (active_.size() != rows * cols)
        throw ShapeError("binary image has " + std::to_string(active_.size()) + " flags for " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    for (auto v : active_)
        if (v > 1)
            throw InvalidArgument("binary image entries must be 0 or 1");
}

BinaryImage BinaryImage::filled(std::size_t rows, std::size_t cols, bool active) {
    return BinaryImage(rows, cols, std::vector<std::uint8_t>(rows * cols, active ? 1 : 0));
}

std::size_t BinaryImage::active_count() const noexcept {
    return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), std::uint8_t{1}));
}

namespace {

// Cursor over Netpbm bytes: whitespace-separated header tokens, '#' starts a
// comment running to the end of the line.
class NetpbmReader {
public:
    explicit NetpbmReader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    bool at_end() const noexcept { return pos_ >= bytes_.size(); }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    std::string_view magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P')
            fail("missing Netpbm magic number");
        pos_ = 2;
        return bytes_.substr(0, 2);
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r')
                    ++pos_;
            } else if (is_space(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint64_t number(const char* what) {
        skip_space_and_comments();
        if (at_end())
            fail(std::string("unexpected end of data reading ") + what);
        std::uint64_t value = 0;
        const char* first = bytes_.data() + pos_;
        const char* last = bytes_.data() + bytes_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr == first)
            fail(std::string("expected unsigned integer for ") + what);
        if (ptr != last && !is_space(*ptr) && *ptr != '#')
            fail(std::string("malformed token for ") + what);
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    // Plain PBM allows bits without separating whitespace.
    int bit() {
        skip_space_and_comments();
        if (at_end())
            fail("truncated PBM payload");
        const char c = bytes_[pos_];
        if (c != '0' && c != '1')
            fail("PBM samples must be 0 or 1");
        ++pos_;
        return c - '0';
    }

    // Exactly one whitespace byte separates the header from a raster.
    void raster_separator() {
        if (at_end() || !is_space(bytes_[pos_]))
            fail("missing whitespace before raster");
        ++pos_;
    }

    std::string_view take(std::size_t count) {
        if (bytes_.size() - pos_ < count) {
            pos_ = bytes_.size();
            fail("truncated raster");
        }
        auto out = bytes_.substr(pos_, count);
        pos_ += count;
        return out;
    }

private:
    static bool is_space(char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::pair<std::size_t, std::size_t> read_dimensions(NetpbmReader& in) {
    const auto cols = in.number("width");
    const auto rows = in.number("height");
    if (cols == 0 || rows == 0)
        in.fail("image dimensions must be positive");
    if (rows > std::numeric_limits<std::uint32_t>::max() / cols)
        in.fail("image dimensions too large");
    return {static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
}

void append_wrapped(std::string& out, std::string_view token, std::size_t& line_len) {
    constexpr std::size_t kMaxLine = 70;
    if (line_len != 0) {
        if (line_len + 1 + token.size() > kMaxLine) {
            out += '\n';
            line_len = 0;
        } else {
            out += ' ';
            ++line_len;
        }
    }
    out += token;
    line_len += token.size();
}

} // namespace

GrayImage load_gray(std::string_view bytes) {
    NetpbmReader in(bytes);
    const auto magic = in.magic();
    if (magic != "P2" && magic != "P5")
        in.fail("expected PGM magic P2 or P5, got '" + std::string(magic) + "'");
    const bool ascii = magic == "P2";
    const auto [rows, cols] = read_dimensions(in);
    const auto maxval = in.number("maxval");
    if (maxval == 0 || maxval > 65535)
        in.fail("PGM maxval must be in 1..65535");

    const std::size_t count = rows * cols;
    const double scale = 1.0 / static_cast<double>(maxval);
    std::vector<double> values(count);
    if (ascii) {
        for (auto& v : values) {
            const auto sample = in.number("sample");
            if (sample > maxval)
                in.fail("sample exceeds maxval");
            v = static_cast<double>(sample) * scale;
        }
    } else {
        in.raster_separator();
        const std::size_t width = maxval < 256 ? 1 : 2;
        const auto raster = in.take(count * width);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t sample = static_cast<unsigned char>(raster[i * width]);
            if (width == 2)
                sample = (sample << 8) | static_cast<unsigned char>(raster[i * width + 1]);
            if (sample > maxval)
                throw ParseError("sample exceeds maxval", in.offset() - (count - i) * width);
            values[i] = static_cast<double>(sample) * scale;
        }
    }
    return GrayImage(rows, cols, std::move(values));
}

std::string save_gray(const GrayImage& image, GrayFormat format, std::uint16_t maxval) {
    if (maxval == 0)
        throw InvalidArgument("PGM maxval must be positive");
    std::string out = format == GrayFormat::PgmAscii ? "P2\n" : "P5\n";
    out += std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n" +
           std::to_string(maxval) + "\n";
    const auto level = [maxval](double v) {
        return static_cast<std::uint32_t>(std::lround(v * maxval));
    };
    const auto values = image.intensities();
    if (format == GrayFormat::PgmAscii) {
        for (std::size_t r = 0; r < image.rows(); ++r) {
            std::size_t line_len = 0;
            for (std::size_t c = 0; c < image.cols(); ++c)
                append_wrapped(out, std::to_string(level(values[r * image.cols() + c])), line_len);
            out += '\n';
        }
    } else {
        for (double v : values) {
            const auto sample = level(v);
            if (maxval >= 256)
                out += static_cast<char>(sample >> 8);
            out += static_cast<char>(sample & 0xff);
        }
    }
    return out;
}

BinaryImage load_binary(std::string_view bytes) {
    NetpbmReader in(bytes);
    const auto magic = in.magic();
    if (magic != "P1" && magic != "P4")
        in.fail("expected PBM magic P1 or P4, got '" + std::string(magic) + "'");
    const auto [rows, cols] = read_dimensions(in);
    std::vector<std::uint8_t> active(rows * cols);
    if (magic == "P1") {
        for (auto& a : active)
            a = static_cast<std::uint8_t>(in.bit());
    } else {
        in.raster_separator();
        const std::size_t row_bytes = (cols + 7) / 8;
        const auto raster = in.take(row_bytes * rows);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const auto byte = static_cast<unsigned char>(raster[r * row_bytes + c / 8]);
                active[r * cols + c] = (byte >> (7 - c % 8)) & 1u;
            }
    }
    return BinaryImage(rows, cols, std::move(active));
}

std::string save_binary(const BinaryImage& image) {
    std::string out = "P1\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n";
    const auto flags = image.active();
    for (std::size_t r = 0; r < image.rows(); ++r) {
        std::size_t line_len = 0;
        for (std::size_t c = 0; c < image.cols(); ++c)
            append_wrapped(out, flags[r * image.cols() + c] ? "1" : "0", line_len);
        out += '\n';
    }
    return out;
}

BinaryImage threshold(const GrayImage& image, double tau, ThresholdDirection direction) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw InvalidArgument("threshold tau must lie in [0,1]");
    std::vector<std::uint8_t> active(image.size());
    const auto values = image.intensities();
    for (std::size_t i = 0; i < active.size(); ++i) {
        const bool geq = values[i] >= tau;
        active[i] = (direction == ThresholdDirection::ActiveIfGeq) == geq ? 1 : 0;
    }
    return BinaryImage(image.rows(), image.cols(), std::move(active));
}

BinaryImage generate_percolation(double p, std::size_t rows, std::size_t cols, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("occupation probability must lie in [0,1]");
    if (rows == 0 || cols == 0)
        throw InvalidArgument("image dimensions must be positive");
    std::vector<std::uint8_t> active(rows * cols);
    for (auto& a : active)
        a = rng.bernoulli(p) ? 1 : 0;
    return BinaryImage(rows, cols, std::move(active));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

} // namespace perco
