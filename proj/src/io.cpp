#include "qnucleus/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qnucleus {

nlohmann::json to_json(const ChartBox& box) {
    return {{"dimension", box.dim()}, {"lower", box.lower()}, {"upper", box.upper()},
            {"resolution", box.resolution()}};
}

ChartBox box_from_json(const nlohmann::json& j) {
    try {
        ChartBox box(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>(),
                     j.at("resolution").get<std::vector<int>>());
        if (j.contains("dimension") && j.at("dimension").get<int>() != box.dim())
            throw FormatError("box dimension does not match its arrays");
        return box;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed box JSON: ") + e.what());
    }
}

std::vector<std::int64_t> run_lengths(const VoxelSet& set) {
    std::vector<std::int64_t> runs;
    bool cur = false;
    std::int64_t len = 0;
    for (std::int64_t i = 0; i < set.size(); ++i) {
        const bool b = set.test(i);
        if (b != cur) {
            runs.push_back(len);
            cur = b;
            len = 0;
        }
        ++len;
    }
    runs.push_back(len);
    return runs;
}

nlohmann::json voxelset_to_json(const VoxelSet& set) {
    nlohmann::json j = to_json(set.box());
    j["encoding"] = "rle";
    j["runs"] = run_lengths(set);
    return j;
}

VoxelSet voxelset_from_json(const nlohmann::json& j) {
    try {
        if (j.at("encoding").get<std::string>() != "rle") throw FormatError("unsupported voxel set encoding");
        VoxelSet out(box_from_json(j));
        std::int64_t pos = 0;
        bool cur = false;
        for (const auto& r : j.at("runs")) {
            const std::int64_t len = r.get<std::int64_t>();
            if (len < 0 || pos + len > out.size()) throw FormatError("voxel runs exceed the box");
            if (cur)
                for (std::int64_t i = pos; i < pos + len; ++i) out.set(i);
            pos += len;
            cur = !cur;
        }
        if (pos != out.size()) throw FormatError("voxel runs do not cover the box");
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed voxel set JSON: ") + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp);
        out << content;
        if (!out) throw InputError("failed writing " + tmp);
    }
    std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const nlohmann::json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

}  // namespace qnucleus
