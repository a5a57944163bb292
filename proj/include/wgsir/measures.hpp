#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wgsir/error.hpp"

namespace wgsir {

namespace detail {
struct SortedCache;
}

/// A distribution-valued observation stored as its finite sample of
/// r-dimensional points (row-major, m rows of r values).
///
/// Immutable after construction. For r = 1 the ascending order statistics
/// are computed on first use and shared between copies; concurrent first
/// calls are safe.
class EmpiricalMeasure
{
public:
    /// Takes ownership of `values` (m*dim entries, row-major). Throws on
    /// empty input, dim == 0, a size that is not a multiple of dim, or a
    /// non-finite coordinate.
    EmpiricalMeasure(std::vector<double> values, std::size_t dim);

    std::size_t size() const noexcept { return values_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> point(std::size_t j) const
    {
        return std::span<const double>(values_).subspan(j * dim_, dim_);
    }
    double at(std::size_t j, std::size_t c) const { return values_[j * dim_ + c]; }

    /// Ascending order statistics. Only defined for univariate measures.
    std::span<const double> sorted() const;

    /// FNV-1a hash over dimension and the raw bytes of the points.
    std::uint64_t digest() const noexcept;

private:
    std::vector<double> values_;
    std::size_t dim_;
    std::shared_ptr<detail::SortedCache> cache_;
};

/// Builds a measure from a list of points, reporting the offending index on
/// empty input, ragged dimensions, or non-finite coordinates.
EmpiricalMeasure empirical_from_samples(const std::vector<std::vector<double>>& points);

/// Paired predictor/response observations.
struct DatasetPair
{
    std::vector<EmpiricalMeasure> predictors;
    std::vector<EmpiricalMeasure> responses;
    std::vector<std::string> ids;

    std::size_t size() const noexcept { return predictors.size(); }

    /// Checks n >= 2, equal lengths, and uniform dimension within each side.
    void validate() const;
};

/// Column selection for long-format measure files. An empty id column means
/// the first header column; empty value columns means every other column.
struct CsvSchema
{
    std::string id_column;
    std::vector<std::string> value_columns;
};

struct LabeledMeasures
{
    std::vector<std::string> ids;
    std::vector<EmpiricalMeasure> measures;
};

/// Reads a long-format CSV (`id,v1[,v2,...]`, header required). Rows are
/// grouped by id in order of first appearance; group sizes may differ.
LabeledMeasures load_measures_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Writes measures in the same long format with 17 significant digits, so
/// that reloading reproduces every coordinate bit for bit.
void write_measures_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& ids,
                        const std::vector<EmpiricalMeasure>& measures);

/// Checks that every measure in the list has the same dimension and returns it.
std::size_t common_dimension(const std::vector<EmpiricalMeasure>& measures);

} // namespace wgsir
