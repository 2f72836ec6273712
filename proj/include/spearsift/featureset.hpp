#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spearsift/corpus.hpp"
#include "spearsift/learn/dataset.hpp"
#include "spearsift/parallel.hpp"

namespace spearsift::featureset {

// The 27 feature slots, in fixed order: 7 subject, 2 attachment, 9 body,
// 9 social.
enum class Slot : std::uint8_t {
  SubjectIsReply,
  SubjectHasBank,
  SubjectNumWords,
  SubjectNumChars,
  SubjectRichness,
  SubjectIsForwarded,
  SubjectHasVerify,
  AttachmentNameLength,
  AttachmentSize,
  BodyNumUniqueWords,
  BodyNumNewlines,
  BodyNumWords,
  BodyNumChars,
  BodyRichness,
  BodyHasAttach,
  BodyNumFunctionWords,
  BodyVerifyYourAccount,
  BodyHasSuspension,
  Location,
  NumConnections,
  SummaryLength,
  SummaryNumChars,
  SummaryUniqueWords,
  SummaryNumWords,
  SummaryRichness,
  JobLevel,
  JobType,
};
inline constexpr std::size_t kSlotCount = 27;

enum class SlotKind { Numeric, Boolean, Nominal };
enum class SlotGroup { Subject, Attachment, Body, Social };

std::string_view slot_name(Slot slot);
std::optional<Slot> slot_from_name(std::string_view name);
SlotKind slot_kind(Slot slot);
SlotGroup slot_group(Slot slot);
std::string_view to_string(SlotGroup group);
const std::array<Slot, kSlotCount>& all_slots();

enum class Study { VsSpam, VsBenign, VsMix };
enum class FeatureSet { Subject, Attachment, Body, EmailAll, Social, EmailPlusSocial };

std::string_view to_string(Study study);       // "vs-spam"
std::string_view to_string(FeatureSet set);    // "subject", ..., "email", "social", "all"
std::optional<Study> parse_study(std::string_view text);
std::optional<FeatureSet> parse_feature_set(std::string_view text);

struct Selector {
  FeatureSet set = FeatureSet::EmailPlusSocial;
  Study study = Study::VsSpam;
};

/// Slots used by a selector, in slot order. Attachment features exist only
/// in the SPEAR/SPAM study and body features only in the SPEAR/BENIGN study;
/// other combinations throw InvalidSelector.
std::vector<Slot> selected_slots(const Selector& selector);

/// The feature-set rows reported for each study.
std::vector<FeatureSet> study_feature_sets(Study study);

/// Whether emails with this label take part in the study.
bool study_includes(Study study, corpus::Label label);

using FeatureValue = std::variant<std::monostate, double, bool, std::string>;

inline bool is_available(const FeatureValue& v) { return !std::holds_alternative<std::monostate>(v); }

struct FeatureVector {
  std::array<FeatureValue, kSlotCount> values;
  bool positive = false;  // SPEAR
  std::string row_id;

  const FeatureValue& operator[](Slot s) const { return values[static_cast<std::size_t>(s)]; }
  FeatureValue& operator[](Slot s) { return values[static_cast<std::size_t>(s)]; }
  bool operator==(const FeatureVector&) const = default;
};

/// Every slot that can be computed for the row; the rest stay unavailable.
FeatureVector extract_all(const corpus::LinkedRow& row);

/// Exactly the selector's slots populated. Throws UnavailableFeature naming
/// the first missing slot when the row cannot take part.
FeatureVector assemble(const corpus::LinkedRow& row, const Selector& selector);

struct SlotSchema {
  Slot slot;
  SlotKind kind;
  std::vector<std::string> dictionary;  // nominal values, first-seen order

  bool operator==(const SlotSchema&) const = default;
};

struct DesignMatrix {
  Selector selector;
  std::vector<SlotSchema> schema;
  std::vector<FeatureVector> rows;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  bool encoded = false;
};

struct BuildStats {
  std::size_t considered = 0;  // rows whose label takes part in the study
  std::size_t rejected = 0;    // rows missing a selected slot
  std::map<std::string, std::size_t> rejected_by_slot;
};

/// Assembles every linked row whose label belongs to the study; rows missing
/// a selected slot are left out and counted in `stats`.
DesignMatrix build_matrix(const corpus::LinkedDataset& data, const Selector& selector,
                          Execution exec = Execution::Parallel, BuildStats* stats = nullptr);

/// Booleans -> {0,1}, nominals -> first-seen dictionary codes, numerics
/// unchanged. Idempotent. Throws EmptyMatrix.
DesignMatrix encode(const DesignMatrix& matrix);

/// Encodes against fixed nominal dictionaries (keyed by slot name); values
/// missing from a dictionary become NaN.
DesignMatrix encode_with(const DesignMatrix& matrix,
                         const std::map<std::string, std::vector<std::string>>& dictionaries);

/// Keeps only `slots` (which must all be in the matrix schema).
DesignMatrix restrict_to(const DesignMatrix& matrix, const std::vector<Slot>& slots);

/// Learner view of an encoded matrix. Booleans become two-valued nominals.
learn::Dataset to_dataset(const DesignMatrix& encoded);

// Tab-separated table: row_id, is_spear, one column per selected slot named by
// slot_name(); plus a JSON sidecar at `<path>.schema.json`.
void write_matrix(const std::string& path, const DesignMatrix& matrix);
DesignMatrix read_matrix(const std::string& path);
std::string schema_path(const std::string& matrix_path);

}  // namespace spearsift::featureset
