#include "vckit/config.hpp"

#include "vckit/errors.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vckit {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_ints(const std::vector<int> &v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::vector<int> split_ints(const std::string &s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, ','))
        out.push_back(std::stoi(cell));
    return out;
}

} // namespace

void PipelineConfig::validate() const {
    if (sample_rate <= 0)
        throw ParamError("config: sample_rate must be positive");
    frame.validate();
    if (d_bnf <= 0 || f_dim <= 0 || spk_dim <= 0)
        throw ParamError("config: encoder dims must be positive");
    if (pwav_strides.size() != pwav_channels.size() || pwav_strides.empty())
        throw ParamError("config: pwav_strides and pwav_channels must match");
    if (pwav_channels.back() != f_dim)
        throw ParamError("config: last pwav channel must equal f_dim");
}

std::string PipelineConfig::serialize() const {
    std::ostringstream out;
    out << "[audio]\n";
    out << "sample_rate=" << sample_rate << "\n";
    out << "frame_len_ms=" << fmt_double(frame.frame_len_ms) << "\n";
    out << "hop_ms=" << fmt_double(frame.hop_ms) << "\n";
    out << "window=" << to_string(frame.window) << "\n";
    out << "\n[perturb]\n";
    out << "formant_lo=" << fmt_double(perturb.formant_lo) << "\n";
    out << "formant_hi=" << fmt_double(perturb.formant_hi) << "\n";
    out << "pitch_shift_lo=" << fmt_double(perturb.pitch_shift_lo) << "\n";
    out << "pitch_shift_hi=" << fmt_double(perturb.pitch_shift_hi) << "\n";
    out << "pitch_range_lo=" << fmt_double(perturb.pitch_range_lo) << "\n";
    out << "pitch_range_hi=" << fmt_double(perturb.pitch_range_hi) << "\n";
    out << "eq_peaking_bands=" << perturb.eq_peaking_bands << "\n";
    out << "eq_low_hz=" << fmt_double(perturb.eq_low_hz) << "\n";
    out << "eq_high_hz=" << fmt_double(perturb.eq_high_hz) << "\n";
    out << "eq_q_lo=" << fmt_double(perturb.eq_q_lo) << "\n";
    out << "eq_q_hi=" << fmt_double(perturb.eq_q_hi) << "\n";
    out << "eq_gain_db_lo=" << fmt_double(perturb.eq_gain_db_lo) << "\n";
    out << "eq_gain_db_hi=" << fmt_double(perturb.eq_gain_db_hi) << "\n";
    out << "\n[encoder]\n";
    out << "d_bnf=" << d_bnf << "\n";
    out << "f_dim=" << f_dim << "\n";
    out << "spk_dim=" << spk_dim << "\n";
    out << "pwav_strides=" << join_ints(pwav_strides) << "\n";
    out << "pwav_channels=" << join_ints(pwav_channels) << "\n";
    out << "\n[paths]\n";
    out << "weights=" << weights_path << "\n";
    out << "speaker=" << speaker_path << "\n";
    out << "\n[run]\n";
    out << "seed=" << seed << "\n";
    return out.str();
}

PipelineConfig PipelineConfig::parse(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("config line missing '=': " + line);
        kv[section + "." + line.substr(0, eq)] = line.substr(eq + 1);
    }

    PipelineConfig c;
    auto get = [&](const std::string &key, auto convert, auto &target) {
        auto it = kv.find(key);
        if (it != kv.end())
            target = convert(it->second);
    };
    auto to_int = [](const std::string &s) { return std::stoi(s); };
    auto to_double = [](const std::string &s) { return std::stod(s); };
    auto to_str = [](const std::string &s) { return s; };

    get("audio.sample_rate", to_int, c.sample_rate);
    get("audio.frame_len_ms", to_double, c.frame.frame_len_ms);
    get("audio.hop_ms", to_double, c.frame.hop_ms);
    if (auto it = kv.find("audio.window"); it != kv.end())
        c.frame.window = window_kind_from_string(it->second);
    get("perturb.formant_lo", to_double, c.perturb.formant_lo);
    get("perturb.formant_hi", to_double, c.perturb.formant_hi);
    get("perturb.pitch_shift_lo", to_double, c.perturb.pitch_shift_lo);
    get("perturb.pitch_shift_hi", to_double, c.perturb.pitch_shift_hi);
    get("perturb.pitch_range_lo", to_double, c.perturb.pitch_range_lo);
    get("perturb.pitch_range_hi", to_double, c.perturb.pitch_range_hi);
    get("perturb.eq_peaking_bands", to_int, c.perturb.eq_peaking_bands);
    get("perturb.eq_low_hz", to_double, c.perturb.eq_low_hz);
    get("perturb.eq_high_hz", to_double, c.perturb.eq_high_hz);
    get("perturb.eq_q_lo", to_double, c.perturb.eq_q_lo);
    get("perturb.eq_q_hi", to_double, c.perturb.eq_q_hi);
    get("perturb.eq_gain_db_lo", to_double, c.perturb.eq_gain_db_lo);
    get("perturb.eq_gain_db_hi", to_double, c.perturb.eq_gain_db_hi);
    get("encoder.d_bnf", to_int, c.d_bnf);
    get("encoder.f_dim", to_int, c.f_dim);
    get("encoder.spk_dim", to_int, c.spk_dim);
    get("encoder.pwav_strides", split_ints, c.pwav_strides);
    get("encoder.pwav_channels", split_ints, c.pwav_channels);
    get("paths.weights", to_str, c.weights_path);
    get("paths.speaker", to_str, c.speaker_path);
    if (auto it = kv.find("run.seed"); it != kv.end())
        c.seed = std::stoull(it->second);
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void PipelineConfig::save(const std::string &path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << serialize();
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace vckit
