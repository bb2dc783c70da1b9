#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "kpb/errors.hpp"

namespace kpb::csv {

/// Doubles rendered with 17 significant digits, '.' decimal, LF endings.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Writer {
public:
    Writer(const std::string& path, const std::string& header) : out_(path, std::ios::binary) {
        if (!out_) throw MissingInput("csv: cannot open " + path);
        out_ << header << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    void row_nums(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ << ",";
            out_ << num(vals[i]);
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace kpb::csv
