#include "armauth/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "armauth/error.hpp"

namespace fs = std::filesystem;

namespace armauth {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw InvalidInput("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw InvalidInput("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(std::string_view s, const std::string& origin, std::size_t line) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput(origin + ":" + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::vector<SensorSample> parse_sensor_csv(std::string_view text, const std::string& origin) {
    std::vector<SensorSample> out;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() != 4 || cells[0] != "t" || cells[1] != "x" || cells[2] != "y" || cells[3] != "z")
                throw InvalidInput(origin + ": expected header t,x,y,z");
            continue;
        }
        if (cells.size() != 4) throw InvalidInput(origin + ":" + std::to_string(line_no) + ": expected 4 columns");
        out.push_back({parse_number(cells[0], origin, line_no), parse_number(cells[1], origin, line_no),
                       parse_number(cells[2], origin, line_no), parse_number(cells[3], origin, line_no)});
    }
    if (!header_seen) throw InvalidInput(origin + ": empty file");
    return out;
}

std::vector<SensorSample> read_sensor_csv(const fs::path& path) {
    return parse_sensor_csv(read_file(path), path.string());
}

std::string format_sensor_csv(std::span<const SensorSample> samples) {
    std::string out = "t,x,y,z\n";
    out.reserve(samples.size() * 64);
    for (const auto& s : samples) {
        out += format_double(s.t);
        out += ',';
        out += format_double(s.x);
        out += ',';
        out += format_double(s.y);
        out += ',';
        out += format_double(s.z);
        out += '\n';
    }
    return out;
}

fs::path session_dir(const fs::path& root, const SessionKey& key) {
    return root / std::to_string(key.user_id) /
           ("p" + std::to_string(key.phase) + "s" + std::to_string(key.session));
}

namespace {

bool parse_int(std::string_view s, int& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_split_dir(const std::string& name, int& phase, int& session) {
    // p<phase>s<session>
    if (name.size() < 4 || name[0] != 'p') return false;
    const auto spos = name.find('s', 1);
    if (spos == std::string::npos) return false;
    return parse_int(std::string_view(name).substr(1, spos - 1), phase) &&
           parse_int(std::string_view(name).substr(spos + 1), session);
}

}  // namespace

Dataset load_dataset(const fs::path& root, double target_hz) {
    if (!fs::is_directory(root)) throw InvalidInput("data directory not found: " + root.string());
    Dataset data;
    for (const auto& user_entry : fs::directory_iterator(root)) {
        if (!user_entry.is_directory()) continue;
        int user = 0;
        if (!parse_int(user_entry.path().filename().string(), user)) continue;
        for (const auto& split_entry : fs::directory_iterator(user_entry.path())) {
            if (!split_entry.is_directory()) continue;
            SessionKey key{user, 0, 0};
            if (!parse_split_dir(split_entry.path().filename().string(), key.phase, key.session)) continue;
            const auto acc_path = split_entry.path() / "accel.csv";
            const auto rot_path = split_entry.path() / "gyro.csv";
            if (!fs::exists(acc_path)) throw InvalidInput("missing " + acc_path.string());
            if (!fs::exists(rot_path)) throw InvalidInput("missing " + rot_path.string());
            SessionRecording rec;
            rec.key = key;
            try {
                rec.acc = validate_and_resample(read_sensor_csv(acc_path), target_hz, SensorKind::Accelerometer);
                rec.rot = validate_and_resample(read_sensor_csv(rot_path), target_hz, SensorKind::Gyroscope);
            } catch (const InvalidInput& e) {
                throw InvalidInput(split_entry.path().string() + ": " + e.what());
            }
            data.sessions.emplace(key, std::move(rec));
        }
    }
    if (data.sessions.empty()) throw InvalidInput("no recordings found under " + root.string());
    return data;
}

void save_recording(const fs::path& root, const SessionKey& key, std::span<const SensorSample> acc,
                    std::span<const SensorSample> rot) {
    const auto dir = session_dir(root, key);
    write_file_atomic(dir / "accel.csv", format_sensor_csv(acc));
    write_file_atomic(dir / "gyro.csv", format_sensor_csv(rot));
}

std::string format_feature_csv(const FeatureCorpus& corpus, LayoutKind kind) {
    const FeatureLayout& layout = layout_for(kind);
    std::string out = "user_id,phase,session,window_start";
    for (const auto& id : layout) {
        out += ',';
        // fused names repeat across modalities
        out += kind == LayoutKind::Fused ? id.qualified_name() : id.name();
    }
    out += '\n';
    for (const auto& [key, sf] : corpus.sessions) {
        for (std::size_t i = 0; i < sf.size(); ++i) {
            const FeatureVector fv = kind == LayoutKind::Acc32   ? sf.acc[i]
                                     : kind == LayoutKind::Rot44 ? sf.rot[i]
                                                                 : sf.fused(i);
            out += std::to_string(key.user_id) + ',' + std::to_string(key.phase) + ',' + std::to_string(key.session) +
                   ',' + std::to_string(fv.provenance.window_start);
            for (double v : fv.values) {
                out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    return out;
}

std::string format_ranking_csv(std::span<const RankedFeature> ranking) {
    std::string out = "rank,feature,mean_gain,std_gain\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        out += std::to_string(i + 1) + ',' + ranking[i].feature.name() + ',' + format_double(ranking[i].mean_gain) +
               ',' + format_double(ranking[i].std_gain) + '\n';
    }
    return out;
}

std::string format_subset(const FeatureLayout& subset) {
    std::string out;
    for (const auto& id : subset) out += id.qualified_name() + '\n';
    return out;
}

FeatureLayout parse_subset(std::string_view text) {
    std::vector<FeatureId> ids;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty() || line.front() == '#') continue;
        const auto id = FeatureId::parse_qualified(line);
        for (const auto& seen : ids)
            if (seen == id) throw InvalidInput("duplicate feature in subset: " + std::string(line));
        ids.push_back(id);
    }
    if (ids.empty()) throw InvalidInput("empty feature subset");
    return FeatureLayout(std::move(ids));
}

FeatureLayout read_subset(const fs::path& path) {
    try {
        return parse_subset(read_file(path));
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

std::string format_decision_log(std::span<const DecisionRecord> records) {
    std::string out = "user_id,window_start,score,threshold,decision\n";
    for (const auto& r : records) {
        out += std::to_string(r.user_id) + ',' + std::to_string(r.window_start) + ',';
        if (r.error.empty()) {
            out += format_double(r.score) + ',' + format_double(r.threshold) + ',' +
                   (r.decision == Decision::Accept ? "accept" : "reject");
        } else {
            out += ",," + std::string("error");
        }
        out += '\n';
    }
    return out;
}

}  // namespace armauth
