#include "wgsir/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace wgsir {

namespace detail {
struct SortedCache
{
    std::once_flag once;
    std::vector<double> values;
};
} // namespace detail

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim), cache_(std::make_shared<detail::SortedCache>())
{
    if (dim_ == 0)
        throw Error("empirical measure: dimension must be at least 1");
    if (values_.empty())
        throw Error("empirical measure: empty input");
    if (values_.size() % dim_ != 0)
        throw Error("empirical measure: value count is not a multiple of the dimension");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k]))
            throw Error("empirical measure: non-finite value at index " + std::to_string(k / dim_));
    }
}

std::span<const double> EmpiricalMeasure::sorted() const
{
    if (dim_ != 1)
        throw Error("empirical measure: order statistics require a univariate measure");
    std::call_once(cache_->once, [this] {
        std::vector<double> s = values_;
        std::sort(s.begin(), s.end());
        cache_->values = std::move(s);
    });
    return cache_->values;
}

std::uint64_t EmpiricalMeasure::digest() const noexcept
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint64_t d = dim_;
    mix(&d, sizeof d);
    mix(values_.data(), values_.size() * sizeof(double));
    return h;
}

EmpiricalMeasure empirical_from_samples(const std::vector<std::vector<double>>& points)
{
    if (points.empty())
        throw Error("empirical measure: empty input");
    const std::size_t dim = points.front().size();
    if (dim == 0)
        throw Error("empirical measure: zero-dimensional point at index 0");
    std::vector<double> values;
    values.reserve(points.size() * dim);
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].size() != dim)
            throw Error("ragged dimensions at index " + std::to_string(j));
        for (double v : points[j]) {
            if (!std::isfinite(v))
                throw Error("empirical measure: non-finite value at index " + std::to_string(j));
            values.push_back(v);
        }
    }
    return EmpiricalMeasure(std::move(values), dim);
}

std::size_t common_dimension(const std::vector<EmpiricalMeasure>& measures)
{
    if (measures.empty())
        throw Error("measure list is empty");
    const std::size_t dim = measures.front().dim();
    for (std::size_t i = 1; i < measures.size(); ++i) {
        if (measures[i].dim() != dim)
            throw Error("measure " + std::to_string(i) + " has dimension " +
                        std::to_string(measures[i].dim()) + ", expected " + std::to_string(dim));
    }
    return dim;
}

void DatasetPair::validate() const
{
    if (predictors.size() != responses.size())
        throw Error("dataset: " + std::to_string(predictors.size()) + " predictors but " +
                    std::to_string(responses.size()) + " responses");
    if (predictors.size() < 2)
        throw Error("dataset: at least 2 observations are required");
    if (!ids.empty() && ids.size() != predictors.size())
        throw Error("dataset: id count does not match observation count");
    common_dimension(predictors);
    common_dimension(responses);
}

namespace {

std::vector<std::string_view> split_row(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& c : cells) {
        while (!c.empty() && (c.front() == ' ' || c.front() == '\t'))
            c.remove_prefix(1);
        while (!c.empty() && (c.back() == ' ' || c.back() == '\t' || c.back() == '\r'))
            c.remove_suffix(1);
    }
    return cells;
}

std::size_t column_index(const std::vector<std::string_view>& header, const std::string& name)
{
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name)
            return c;
    }
    throw Error("csv: column '" + name + "' not found in header");
}

bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

} // namespace

LabeledMeasures load_measures_csv(const std::filesystem::path& path, const CsvSchema& schema)
{
    std::ifstream in(path);
    if (!in)
        throw Error("csv: cannot open " + path.string());

    std::string header_line;
    bool have_header = false;
    while (std::getline(in, header_line)) {
        if (!is_blank(header_line)) {
            have_header = true;
            break;
        }
    }
    if (!have_header)
        throw Error("csv: empty file " + path.string());
    if (header_line.size() >= 3 && std::memcmp(header_line.data(), "\xEF\xBB\xBF", 3) == 0)
        header_line.erase(0, 3);

    const auto header = split_row(header_line);
    if (header.size() < 2)
        throw Error("csv: missing header (need an id column and at least one value column)");
    {
        const auto cell = header[1];
        double probe = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), probe);
        if (ec == std::errc() && ptr == cell.data() + cell.size())
            throw Error("csv: missing header (first row looks numeric)");
    }

    const std::size_t id_col = schema.id_column.empty() ? 0 : column_index(header, schema.id_column);
    std::vector<std::size_t> value_cols;
    if (schema.value_columns.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c != id_col)
                value_cols.push_back(c);
        }
    } else {
        for (const auto& name : schema.value_columns)
            value_cols.push_back(column_index(header, name));
    }
    const std::size_t dim = value_cols.size();

    std::vector<std::string> ids;
    std::vector<std::vector<double>> groups;
    std::unordered_map<std::string, std::size_t> index_of;

    std::string line;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (is_blank(line))
            continue;
        const auto cells = split_row(line);
        if (cells.size() != header.size())
            throw Error("csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(header.size()));
        std::string id(cells[id_col]);
        auto [it, inserted] = index_of.try_emplace(id, groups.size());
        if (inserted) {
            ids.push_back(id);
            groups.emplace_back();
        }
        auto& group = groups[it->second];
        for (std::size_t c : value_cols) {
            const auto cell = cells[c];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v))
                throw Error("csv: unparsable numeric cell at row " + std::to_string(row) + ", column " +
                            std::to_string(c + 1) + " ('" + std::string(cell) + "')");
            group.push_back(v);
        }
    }
    if (groups.empty())
        throw Error("csv: no data rows in " + path.string());

    LabeledMeasures out;
    out.ids = std::move(ids);
    out.measures.reserve(groups.size());
    for (auto& g : groups)
        out.measures.emplace_back(std::move(g), dim);
    return out;
}

void write_measures_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& ids,
                        const std::vector<EmpiricalMeasure>& measures)
{
    if (ids.size() != measures.size())
        throw Error("csv: id count does not match measure count");
    const std::size_t dim = common_dimension(measures);
    std::ofstream out(path);
    if (!out)
        throw Error("csv: cannot write " + path.string());
    out << "id";
    for (std::size_t c = 0; c < dim; ++c)
        out << ",v" << (c + 1);
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < measures.size(); ++i) {
        const auto& mu = measures[i];
        for (std::size_t j = 0; j < mu.size(); ++j) {
            out << ids[i];
            for (std::size_t c = 0; c < dim; ++c) {
                std::snprintf(buf, sizeof buf, "%.17g", mu.at(j, c));
                out << ',' << buf;
            }
            out << '\n';
        }
    }
    if (!out)
        throw Error("csv: write failed for " + path.string());
}

} // namespace wgsir
