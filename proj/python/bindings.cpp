#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgen/annotate.hpp"
#include "qgen/generate.hpp"
#include "qgen/lexicon.hpp"
#include "qgen/metrics.hpp"
#include "qgen/pattern.hpp"
#include "qgen/rules.hpp"
#include "qgen/score.hpp"

namespace py = pybind11;
using namespace qgen;

namespace {

py::dict sentence_dict(const AnnotatedSentence& s) {
  py::dict layers;
  for (LayerId layer : kAllLayers) {
    py::list row;
    for (const auto& cell : s.layer(layer)) row.append(cell.values());
    layers[py::str(std::string(layer_name(layer)))] = row;
  }
  py::dict out;
  out["id"] = s.source_id;
  out["tokens"] = s.surface();
  out["layers"] = layers;
  return out;
}

py::dict candidate_dict(const QuestionCandidate& c) {
  py::dict out;
  out["id"] = c.id;
  out["question"] = c.text;
  out["answer"] = c.answer;
  out["rule_id"] = c.rule_id;
  out["source_id"] = c.source_id;
  out["sentence"] = c.sentence;
  out["match_score"] = c.match.score;
  out["estimated_score"] = c.estimated_score;
  return out;
}

class Annotator {
 public:
  Annotator(const std::string& data_dir, const std::vector<std::string>& fixtures) {
    ProviderConfig config;
    config.data_dir = data_dir;
    config.fixture_paths = fixtures;
    toolkit_ = make_toolkit(config);
  }

  AnnotatedSentence annotate_one(const std::string& text, const std::string& id) const {
    return annotate(text, toolkit_.providers, id);
  }

  std::vector<AnnotatedSentence> annotate_text(const std::string& text) const {
    std::vector<AnnotatedSentence> out;
    for (const auto& s : split_sentences(text))
      out.push_back(annotate(s, toolkit_.providers, "s" + std::to_string(out.size() + 1)));
    return out;
  }

  const Toolkit& toolkit() const { return toolkit_; }

 private:
  Toolkit toolkit_;
};

std::vector<TrainingPair> pairs_from(const py::list& items) {
  std::vector<TrainingPair> pairs;
  for (const auto& item : items) {
    const auto d = item.cast<py::dict>();
    TrainingPair p;
    p.id = d.contains("id") ? py::str(d["id"]).cast<std::string>() : std::to_string(pairs.size() + 1);
    p.sentence = d["sentence"].cast<std::string>();
    p.question = d["question"].cast<std::string>();
    if (d.contains("answer") && !d["answer"].is_none()) p.answer = d["answer"].cast<std::string>();
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rule-based question generation";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<RuleError>(m, "RuleError", PyExc_RuntimeError);

  // Library warnings are routed to Python's warnings module.
  set_warning_sink([](std::string_view message) {
    py::gil_scoped_acquire gil;
    PyErr_WarnEx(PyExc_UserWarning, std::string(message).c_str(), 1);
  });

  py::class_<AnnotatedSentence>(m, "Sentence")
      .def_property_readonly("id", [](const AnnotatedSentence& s) { return s.source_id; })
      .def_property_readonly("tokens", &AnnotatedSentence::surface)
      .def_property_readonly("text", &AnnotatedSentence::text)
      .def("to_dict", &sentence_dict)
      .def("__len__", &AnnotatedSentence::size)
      .def("__repr__", [](const AnnotatedSentence& s) { return "<Sentence '" + s.text() + "'>"; });

  py::class_<Annotator>(m, "Annotator")
      .def(py::init<const std::string&, const std::vector<std::string>&>(), py::arg("data_dir") = "",
           py::arg("fixtures") = std::vector<std::string>{})
      .def("annotate", &Annotator::annotate_one, py::arg("sentence"), py::arg("id") = "s1")
      .def("annotate_text", &Annotator::annotate_text, py::arg("text"));

  m.def("load_annotations", &load_annotations, py::arg("path"));
  m.def("split_sentences", &split_sentences, py::arg("text"));

  m.def(
      "layer_match",
      [](const AnnotatedSentence& a, const AnnotatedSentence& b, const std::string& layer) {
        auto id = parse_layer(layer);
        if (!id) throw InputError("unknown layer '" + layer + "'");
        const auto match = layer_match(create_cp(a), create_cp(b), *id);
        return std::make_pair(match.matched, match.comparable);
      },
      py::arg("a"), py::arg("b"), py::arg("layer"));
  m.def(
      "similarity",
      [](const AnnotatedSentence& a, const AnnotatedSentence& b) { return similarity(create_cp(a), create_cp(b)).score; },
      py::arg("a"), py::arg("b"));

  py::class_<RuleStore>(m, "RuleStore")
      .def(py::init<>())
      .def_static("load", &load_store, py::arg("path"))
      .def("save", [](const RuleStore& s, const std::string& path) { save_store(s, path); }, py::arg("path"))
      .def("to_json", &serialize_store)
      .def_static("from_json", [](const std::string& json) { return deserialize_store(json); }, py::arg("json"))
      .def("__len__", &RuleStore::size)
      .def("success_rate",
           [](const RuleStore& s, RuleId id) {
             const auto* rule = s.find(id);
             if (!rule) throw InputError("unknown rule " + std::to_string(id));
             return rule->success_rate();
           },
           py::arg("rule_id"));

  m.def(
      "train",
      [](const py::list& pairs, const Annotator& annotator) {
        TrainingReport report;
        auto store = train(pairs_from(pairs), annotator.toolkit().providers, *annotator.toolkit().morphology, &report);
        py::list failures;
        for (const auto& f : report.failures) failures.append(py::make_tuple(f.pair_id, f.reason));
        return py::make_tuple(std::move(store), failures);
      },
      py::arg("pairs"), py::arg("annotator"),
      "Learns a rule store from dicts with sentence, question and optional id/answer. "
      "Returns (store, [(pair_id, reason), ...]).");

  m.def(
      "generate",
      [](const std::string& text, const RuleStore& store, const Annotator& annotator, double min_similarity,
         double min_score, std::size_t max_per_sentence, double dedup_threshold, bool simplify) {
        GenerationOptions options;
        options.min_similarity = min_similarity;
        options.max_rules_per_sentence = max_per_sentence;
        options.simplify = simplify;
        auto candidates =
            generate_questions(annotator.annotate_text(text), store, *annotator.toolkit().morphology, options);
        score_candidates(candidates, store);
        candidates = dedup(std::move(candidates), dedup_threshold, true);
        candidates = rank_and_filter(std::move(candidates), min_score, max_per_sentence);
        py::list out;
        std::size_t n = 0;
        for (auto& c : candidates) {
          c.id = "q" + std::to_string(++n);
          out.append(candidate_dict(c));
        }
        return out;
      },
      py::arg("text"), py::arg("store"), py::arg("annotator"), py::arg("min_similarity") = 0.5,
      py::arg("min_score") = 0.75, py::arg("max_per_sentence") = 8, py::arg("dedup_threshold") = 0.9,
      py::arg("simplify") = true);

  m.def(
      "rate",
      [](RuleStore& store, RuleId rule_id, double syntax, double semantics) {
        Rating r;
        r.question_id = "python";
        r.rater_id = "python";
        r.syntax = syntax;
        r.semantics = semantics;
        apply_feedback(store, r, rule_id);
      },
      py::arg("store"), py::arg("rule_id"), py::arg("syntax"), py::arg("semantics"),
      "Folds one (syntax, semantics) verdict into a rule's statistics.");

  auto mm = m.def_submodule("metrics", "BLEU, ROUGE-L and inter-rater reliability");
  mm.def("bleu", &metrics::bleu_n, py::arg("candidate"), py::arg("reference"), py::arg("n") = 4);
  mm.def("bleu_average", &metrics::bleu_average, py::arg("candidate"), py::arg("reference"));
  mm.def("rouge_l", &metrics::rouge_l, py::arg("candidate"), py::arg("reference"));
  mm.def("irr_binary", &metrics::irr_binary, py::arg("ratings"));
  mm.def("irr_numeric", &metrics::irr_numeric, py::arg("ratings"));
}
