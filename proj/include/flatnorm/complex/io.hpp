#pragma once

#include "flatnorm/complex/complex.hpp"

#include <iosfwd>
#include <string>

namespace flatnorm {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format: "V E T" counts, then "v id x y", "e id v1 v2", "t id v1 v2 v3".
void write_complex(std::ostream& os, const Complex2& K);
Complex2 read_complex(std::istream& is);
void save_complex(const std::string& path, const Complex2& K);
Complex2 load_complex(const std::string& path);

// CSV "simplex_id,coefficient" with a header line.
void write_chain(std::ostream& os, const Chain& c);
Chain read_chain(std::istream& is, int dim);
void save_chain(const std::string& path, const Chain& c);
Chain load_chain(const std::string& path, int dim);

}  // namespace flatnorm
