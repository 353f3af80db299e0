#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "specrec/abstract_tr.hpp"
#include "specrec/airy_structure.hpp"
#include "specrec/dictionary.hpp"
#include "specrec/errors.hpp"
#include "specrec/recursion.hpp"
#include "specrec/virasoro.hpp"

namespace specrec {

using nlohmann::json;

inline json ratJson(const Rat& r) {
    return json{{"num", numeratorString(r)}, {"den", denominatorString(r)}};
}

inline Rat ratFromJson(const json& j) {
    return Rat(Int(j.at("num").get<std::string>()), Int(j.at("den").get<std::string>()));
}

/// Conventions block attached to every export: the dz/z indexing, the
/// intersection-number anchor and the epsilon normalization are the three
/// places where a convention choice exists.
inline json conventionsJson() {
    return json{
        {"basis", "label (point,k) is the differential with principal part z^-k dz/z"},
        {"tau0_cubed_anchor", "1"},
        {"airy_dictionary_two_power", "S_{h,n} = 2^(2h-2+n) * omega_{h,n} entrywise"},
        {"epsilon_normalization", "H_k scaled so the linear term is -y_k; eps_3(KW)=1/8, eps_1(BGW)=1/8"},
    };
}

// ------------------------------------------------------------- correlators

inline json correlatorTableToJson(const std::string& curveName, const CorrelatorTable& table) {
    std::vector<BasisLabel> labels;
    std::map<BasisLabel, size_t> labelIndex;
    json corr = json::array();
    for (const auto& [hn, tensor] : table.all()) {
        json entries = json::array();
        for (const auto& [idx, v] : tensor) {
            json indices = json::array();
            for (const auto& l : idx) {
                auto it = labelIndex.find(l);
                if (it == labelIndex.end()) {
                    it = labelIndex.emplace(l, labels.size()).first;
                    labels.push_back(l);
                }
                indices.push_back(it->second);
            }
            entries.push_back(json{{"index", indices},
                                   {"num", numeratorString(v)},
                                   {"den", denominatorString(v)}});
        }
        corr.push_back(json{{"h", hn.first}, {"n", hn.second}, {"entries", entries}});
    }
    json jlabels = json::array();
    for (const auto& l : labels) jlabels.push_back(json{{"point", l.point}, {"k", l.k}});
    return json{{"curve", curveName},
                {"chi_max", table.chiMax},
                {"labels", jlabels},
                {"correlators", corr},
                {"conventions", conventionsJson()}};
}

inline CorrelatorTable correlatorTableFromJson(const json& j) {
    CorrelatorTable table;
    table.chiMax = j.at("chi_max").get<long>();
    std::vector<BasisLabel> labels;
    for (const auto& jl : j.at("labels"))
        labels.push_back(BasisLabel{jl.at("point").get<int>(), jl.at("k").get<long>()});
    for (const auto& jc : j.at("correlators")) {
        long h = jc.at("h").get<long>(), n = jc.at("n").get<long>();
        CorrelatorTable::Tensor t;
        for (const auto& je : jc.at("entries")) {
            LabelTuple idx;
            for (const auto& ji : je.at("index")) idx.push_back(labels.at(ji.get<size_t>()));
            std::sort(idx.begin(), idx.end());
            t[idx] = ratFromJson(je);
        }
        table.store(h, n, std::move(t));
    }
    return table;
}

inline std::string correlatorTableToCsv(const CorrelatorTable& table) {
    std::ostringstream os;
    os << "h,n,index,num,den\n";
    for (const auto& [hn, tensor] : table.all())
        for (const auto& [idx, v] : tensor) {
            os << hn.first << "," << hn.second << ",";
            for (size_t i = 0; i < idx.size(); ++i) {
                if (i) os << "|";
                os << idx[i].point << ":" << idx[i].k;
            }
            os << "," << numeratorString(v) << "," << denominatorString(v) << "\n";
        }
    return os.str();
}

// ---------------------------------------------------------- Airy structures

inline json modeJson(const Mode& m) { return json{{"block", m.block}, {"k", m.k}}; }
inline Mode modeFromJson(const json& j) {
    return Mode{j.at("block").get<int>(), j.at("k").get<int>()};
}

inline json airyTensorsToJson(const AiryTensors& T) {
    json jmodes = json::array();
    for (const Mode& m : T.modes) jmodes.push_back(modeJson(m));
    auto dumpT = [&](const std::map<std::array<Mode, 3>, Rat>& entries) {
        json out = json::array();
        for (const auto& [key, v] : entries) {
            json idx = json::array({modeJson(key[0]), modeJson(key[1]), modeJson(key[2])});
            out.push_back(json{{"i", idx}, {"num", numeratorString(v)}, {"den", denominatorString(v)}});
        }
        return out;
    };
    json eps = json::array();
    for (const auto& [m, v] : T.epsEntries())
        eps.push_back(json{{"i", modeJson(m)}, {"num", numeratorString(v)}, {"den", denominatorString(v)}});
    json shifts = json::object();
    for (const auto& [bl, s] : T.gradeShift) shifts[std::to_string(bl)] = s;
    return json{{"modes", jmodes},       {"odd_modes_only", T.oddModesOnly},
                {"grade_shift", shifts}, {"A", dumpT(T.aEntries())},
                {"B", dumpT(T.bEntries())}, {"C", dumpT(T.cEntries())},
                {"eps", eps},            {"conventions", conventionsJson()}};
}

inline AiryTensors airyTensorsFromJson(const json& j) {
    AiryTensors T;
    for (const auto& jm : j.at("modes")) T.modes.push_back(modeFromJson(jm));
    std::sort(T.modes.begin(), T.modes.end());
    T.oddModesOnly = j.value("odd_modes_only", true);
    if (j.contains("grade_shift"))
        for (const auto& [bl, s] : j.at("grade_shift").items())
            T.gradeShift[std::stoi(bl)] = s.get<int>();
    auto loadT = [&](const json& arr, auto add) {
        for (const auto& je : arr) {
            const json& idx = je.at("i");
            add(modeFromJson(idx.at(0)), modeFromJson(idx.at(1)), modeFromJson(idx.at(2)),
                ratFromJson(je));
        }
    };
    if (j.contains("A")) loadT(j.at("A"), [&](Mode a, Mode b, Mode c, Rat v) { T.addA(a, b, c, v); });
    if (j.contains("B")) loadT(j.at("B"), [&](Mode a, Mode b, Mode c, Rat v) { T.addB(a, b, c, v); });
    if (j.contains("C")) loadT(j.at("C"), [&](Mode a, Mode b, Mode c, Rat v) { T.addC(a, b, c, v); });
    if (j.contains("eps"))
        for (const auto& je : j.at("eps")) T.addEps(modeFromJson(je.at("i")), ratFromJson(je));
    return T;
}

// ------------------------------------------------------------- free energies

inline json freeEnergyTableToJson(const FreeEnergyTable& F) {
    json out = json::array();
    for (const auto& [hn, tensor] : F.all()) {
        json entries = json::array();
        for (const auto& [idx, v] : tensor) {
            json modes = json::array();
            for (const Mode& m : idx) modes.push_back(modeJson(m));
            entries.push_back(json{{"index", modes},
                                   {"num", numeratorString(v)},
                                   {"den", denominatorString(v)}});
        }
        out.push_back(json{{"h", hn.first}, {"n", hn.second}, {"entries", entries}});
    }
    return json{{"chi_max", F.chiMax}, {"tables", out}, {"conventions", conventionsJson()}};
}

inline json fockToJson(const FockPolynomial& S) {
    json terms = json::array();
    for (const auto& [m, v] : S.terms()) {
        terms.push_back(json{{"vars", m.vars},
                             {"hpow", m.hpow},
                             {"num", numeratorString(v)},
                             {"den", denominatorString(v)}});
    }
    return json{{"weight_cutoff", S.weightCutoff},
                {"h_min", S.hMin},
                {"h_max", S.hMax},
                {"terms", terms},
                {"conventions", conventionsJson()}};
}

inline void writeTextFile(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output path: " + path);
    out << content;
}

inline json readJsonFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input path: " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace specrec
