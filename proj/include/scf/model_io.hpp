#ifndef SCF_MODEL_IO_HPP
#define SCF_MODEL_IO_HPP

#include <string>

#include "scf/classify.hpp"
#include "scf/dbn.hpp"

namespace scf {

// Model files are JSON with insertion-ordered keys so identical models dump
// to identical bytes; doubles round-trip exactly. Writes go to a temp file
// in the target directory and are renamed into place on success.
void save_dbn_model(const DbnModel& model, const std::string& path);
DbnModel load_dbn_model(const std::string& path);

void save_classifier_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_classifier_model(const std::string& path);

// "scf-dbn-model" or "scf-classifier-model"; throws DataError on anything else.
std::string peek_model_kind(const std::string& path);

void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace scf
#endif
