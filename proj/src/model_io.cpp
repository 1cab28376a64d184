#include "scf/model_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace scf {

using json = nlohmann::ordered_json;

namespace {

json variables_to_json(const std::vector<Variable>& vars) {
    json arr = json::array();
    for (const auto& v : vars)
        arr.push_back({{"name", v.name}, {"cardinality", v.cardinality}, {"categories", v.categories}});
    return arr;
}

std::vector<Variable> variables_from_json(const json& arr) {
    std::vector<Variable> vars;
    for (const auto& jv : arr) {
        Variable v;
        v.name = jv.at("name").get<std::string>();
        v.cardinality = jv.at("cardinality").get<int>();
        v.categories = jv.at("categories").get<std::vector<std::string>>();
        vars.push_back(std::move(v));
    }
    return vars;
}

json structure_to_json(const ScfStructure& s) {
    json parents = json::array();
    for (const auto& ps : s.parents)
        parents.push_back({{"intra", ps.intra}, {"inter", ps.inter}});
    return {{"targets", s.targets}, {"parents", parents}, {"total_score", s.total_score}};
}

ScfStructure structure_from_json(const json& js) {
    ScfStructure s;
    s.targets = js.at("targets").get<std::vector<int>>();
    for (const auto& jp : js.at("parents")) {
        ParentSet ps;
        ps.intra = jp.at("intra").get<int>();
        ps.inter = jp.at("inter").get<std::vector<int>>();
        s.parents.push_back(std::move(ps));
    }
    s.total_score = js.at("total_score").get<double>();
    return s;
}

json stats_to_json(const SufficientStats& st) {
    return {{"r", st.r}, {"q", st.q}, {"counts", st.counts}};
}

SufficientStats stats_from_json(const json& js) {
    SufficientStats st;
    st.r = js.at("r").get<int>();
    st.q = js.at("q").get<long long>();
    st.counts = js.at("counts").get<std::vector<std::vector<long long>>>();
    st.row_sums.reserve(st.counts.size());
    for (const auto& row : st.counts) {
        long long s = 0;
        for (long long c : row) s += c;
        st.row_sums.push_back(s);
        st.total += s;
    }
    st.validate();
    return st;
}

json stats_list_to_json(const std::vector<SufficientStats>& list) {
    json arr = json::array();
    for (const auto& st : list) arr.push_back(stats_to_json(st));
    return arr;
}

std::vector<SufficientStats> stats_list_from_json(const json& arr) {
    std::vector<SufficientStats> list;
    for (const auto& js : arr) list.push_back(stats_from_json(js));
    return list;
}

json dataset_to_json(const CategoricalDataset& data) {
    return {{"variables", variables_to_json(data.variables)}, {"rows", data.rows}};
}

CategoricalDataset dataset_from_json(const json& js) {
    CategoricalDataset data;
    data.variables = variables_from_json(js.at("variables"));
    data.rows = js.at("rows").get<std::vector<std::vector<int>>>();
    data.validate();
    return data;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    json js;
    try {
        in >> js;
    } catch (const json::exception& e) {
        throw DataError("corrupt model file " + path + ": " + e.what());
    }
    return js;
}

json require_format(const std::string& path, const std::string& format) {
    json js = load_json(path);
    if (!js.is_object() || js.value("format", "") != format)
        throw DataError(path + " is not a " + format + " file");
    return js;
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out << content;
        if (!out.flush()) throw DataError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

void save_dbn_model(const DbnModel& model, const std::string& path) {
    json js;
    js["format"] = "scf-dbn-model";
    js["version"] = 1;
    js["class"] = model.cls == DbnClass::None    ? "none"
                  : model.cls == DbnClass::Intra ? "intra"
                  : model.cls == DbnClass::Inter ? "inter"
                  : model.cls == DbnClass::Scf   ? "scf"
                                                 : "bma-scf";
    js["k"] = model.k;
    js["ess"] = model.ess;
    js["variables"] = variables_to_json(model.variables);
    js["g0"] = structure_to_json(model.g0);
    js["g0_counts"] = stats_list_to_json(model.g0_counts);
    js["gplus"] = structure_to_json(model.gplus);
    if (model.cls == DbnClass::BmaScf)
        js["transitions"] = dataset_to_json(model.transitions);
    else
        js["gplus_counts"] = stats_list_to_json(model.gplus_counts);
    js["train_score"] = model.train_score;
    atomic_write_text(path, js.dump(2) + "\n");
}

DbnModel load_dbn_model(const std::string& path) {
    const json js = require_format(path, "scf-dbn-model");
    DbnModel model;
    try {
        model.cls = parse_dbn_class(js.at("class").get<std::string>());
        model.k = js.at("k").get<int>();
        model.ess = js.at("ess").get<double>();
        model.variables = variables_from_json(js.at("variables"));
        model.g0 = structure_from_json(js.at("g0"));
        model.g0_counts = stats_list_from_json(js.at("g0_counts"));
        model.gplus = structure_from_json(js.at("gplus"));
        if (model.cls == DbnClass::BmaScf)
            model.transitions = dataset_from_json(js.at("transitions"));
        else
            model.gplus_counts = stats_list_from_json(js.at("gplus_counts"));
        model.train_score = js.at("train_score").get<double>();
    } catch (const json::exception& e) {
        throw DataError("corrupt model file " + path + ": " + e.what());
    }
    return model;
}

void save_classifier_model(const ClassifierModel& model, const std::string& path) {
    json js;
    js["format"] = "scf-classifier-model";
    js["version"] = 1;
    js["variant"] = variant_name(model.variant);
    js["alpha"] = std::isinf(model.alpha) ? json("inf") : json(model.alpha);
    js["ess"] = model.ess;
    js["class_id"] = model.class_id;
    js["variables"] = variables_to_json(model.variables);
    js["structure"] = structure_to_json(model.structure);
    js["feature_counts"] = stats_list_to_json(model.feature_counts);
    js["class_counts"] = stats_to_json(model.class_counts);
    atomic_write_text(path, js.dump(2) + "\n");
}

ClassifierModel load_classifier_model(const std::string& path) {
    const json js = require_format(path, "scf-classifier-model");
    ClassifierModel model;
    try {
        model.variant = parse_variant(js.at("variant").get<std::string>());
        const json& ja = js.at("alpha");
        model.alpha = ja.is_string() ? ScoreConfig::inf : ja.get<double>();
        model.ess = js.at("ess").get<double>();
        model.class_id = js.at("class_id").get<int>();
        model.variables = variables_from_json(js.at("variables"));
        model.structure = structure_from_json(js.at("structure"));
        model.feature_counts = stats_list_from_json(js.at("feature_counts"));
        model.class_counts = stats_from_json(js.at("class_counts"));
    } catch (const json::exception& e) {
        throw DataError("corrupt model file " + path + ": " + e.what());
    }
    return model;
}

std::string peek_model_kind(const std::string& path) {
    const json js = load_json(path);
    const std::string fmt = js.is_object() ? js.value("format", "") : "";
    if (fmt != "scf-dbn-model" && fmt != "scf-classifier-model")
        throw DataError(path + " is not a recognized model file");
    return fmt;
}

}  // namespace scf
