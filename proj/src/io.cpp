#include "gaussgeo/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gaussgeo {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileFormatError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Matrix matrix_from_values(const std::vector<double>& values) {
    const auto count = values.size();
    const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(
        static_cast<double>(count))));
    if (dim * dim != count)
        throw FileFormatError("covariance file: element count is not a square");
    if (dim == 0 || dim % 2 != 0)
        throw FileFormatError("covariance file: dimension must be even and > 0");
    Matrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * dim + c];
    return m;
}

// returns the block-ordered raw matrix of either format
Matrix parse_matrix(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw FileFormatError("covariance file: empty input");
    if (text[first] != '{') {
        std::istringstream in(text);
        std::vector<double> values;
        double v;
        while (in >> v) values.push_back(v);
        if (!in.eof())
            throw FileFormatError("covariance file: non-numeric token");
        return matrix_from_values(values);
    }

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw FileFormatError(std::string("covariance file: bad JSON: ") +
                              err.what());
    }
    if (!doc.is_object() || !doc.contains("modes") || !doc.contains("matrix"))
        throw FileFormatError(
            "covariance file: JSON needs \"modes\" and \"matrix\" fields");
    if (!doc["modes"].is_number_integer() || doc["modes"].get<int>() < 1)
        throw FileFormatError("covariance file: \"modes\" must be a positive integer");
    const int modes = doc["modes"].get<int>();
    std::string ordering = "block";
    if (doc.contains("ordering")) {
        if (!doc["ordering"].is_string())
            throw FileFormatError("covariance file: \"ordering\" must be a string");
        ordering = doc["ordering"].get<std::string>();
        if (ordering != "block" && ordering != "interleaved")
            throw FileFormatError(
                "covariance file: \"ordering\" must be \"block\" or \"interleaved\"");
    }
    if (!doc["matrix"].is_array())
        throw FileFormatError("covariance file: \"matrix\" must be an array");
    std::vector<double> values;
    values.reserve(doc["matrix"].size());
    for (const auto& item : doc["matrix"]) {
        if (!item.is_number())
            throw FileFormatError("covariance file: matrix entries must be numbers");
        values.push_back(item.get<double>());
    }
    const std::size_t expected = 4u * static_cast<std::size_t>(modes) * modes;
    if (values.size() != expected)
        throw FileFormatError("covariance file: matrix must hold 4 N^2 entries");
    Matrix m = matrix_from_values(values);
    if (ordering == "interleaved") m = interleaved_to_block(m);
    return m;
}

CovarianceMatrix to_covariance(Matrix m) {
    const int modes = static_cast<int>(m.rows()) / 2;
    try {
        return CovarianceMatrix(modes, std::move(m));
    } catch (const std::invalid_argument& err) {
        throw FileFormatError(std::string("covariance file: ") + err.what());
    }
}

}  // namespace

CovarianceMatrix load_covariance(const std::string& path) {
    return to_covariance(parse_matrix(read_file(path)));
}

Matrix load_covariance_matrix(const std::string& path) {
    return parse_matrix(read_file(path));
}

CovarianceMatrix parse_covariance_json(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{')
        throw FileFormatError("covariance JSON: expected an object");
    return to_covariance(parse_matrix(text));
}

CovarianceMatrix parse_covariance_text(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        throw FileFormatError("covariance text: got JSON, expected plain numbers");
    return to_covariance(parse_matrix(text));
}

std::string format_double(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileFormatError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) {
            out.close();
            fs::remove(tmp);
            throw FileFormatError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw FileFormatError("atomic rename failed: " + target.string());
    }
}

}  // namespace gaussgeo
