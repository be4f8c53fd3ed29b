#pragma once

#include <string>

#include "erdkit/recording.hpp"
#include "erdkit/synth.hpp"

namespace erdkit {

enum class RecordingFormat { CsvMatrix, JsonLines };

// CsvMatrix: line 1 `fs=<hz>`, line 2 comma-separated channel labels plus a
// final `trigger` column, then one row per sample; a nonzero trigger cell is
// an event code (1..4). JsonLines: line 1 a header object {"fs","labels"},
// then one JSON array per sample [ch0, ..., chN, trigger]. JsonLines round-
// trips doubles bit-exactly.
Recording load_recording(const std::string& path, RecordingFormat format);
void save_recording(const Recording& recording, const std::string& path,
                    RecordingFormat format);

// Infers the format from the file extension (.csv / .jsonl); throws
// InputError for anything else.
RecordingFormat format_for_path(const std::string& path);

// Ground-truth sidecar written next to synthetic recordings.
void save_ground_truth(const GroundTruth& truth, const std::string& path);
GroundTruth load_ground_truth(const std::string& path);

std::string read_text_file(const std::string& path);   // throws InputError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace erdkit
