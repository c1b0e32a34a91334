#pragma once

#include <cstddef>
#include <vector>

namespace vckit {

// Row-major T x D matrix on the shared 10 ms frame grid. Carrier for
// BNFs and the H_b / H_w / H_p / H_f features.
struct FeatureMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

    double &at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    const double *row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
    double *row(int r) { return data.data() + static_cast<size_t>(r) * cols; }

    bool same_shape(const FeatureMatrix &other) const {
        return rows == other.rows && cols == other.cols;
    }

    bool operator==(const FeatureMatrix &) const = default;
};

} // namespace vckit
