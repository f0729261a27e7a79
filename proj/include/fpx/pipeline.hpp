#pragma once

#include <cstdint>
#include <vector>

namespace fpx {

// Engines of the simulated kernel pipeline. Sync marks the memory barrier
// between main-loop iterations; it and CopyAsync are tile-granular
// (slice = -1).
enum class PipeEngine { CopyAsync, DequantLds, Mma, Sync };

const char* engine_name(PipeEngine e);

struct PipelineEvent {
    int time;
    PipeEngine engine;
    int slice;  // -1 for tile-granular events
    int tile;

    bool operator==(const PipelineEvent&) const = default;
};

using PipelineTrace = std::vector<PipelineEvent>;

// Static overlap schedule for `tiles` main-loop iterations of `slices`
// slices each: mma(k) runs one step after dequant(k), dequant(k+1) is
// co-scheduled with mma(k), the async copy of tile t+1 is issued when tile
// t starts de-quantizing, and the barrier before tile t+1 sits at the end
// of slice k = slices-2. Purely analytical; nothing executes concurrently.
PipelineTrace pipeline_schedule(int tiles, int slices = 4);

// Throws Error(InvalidValue) if the trace violates the schedule contract:
// per-slice dequant-before-mma, co-scheduling, and the between-tile
// synchronization placement.
void validate_pipeline_trace(const PipelineTrace& trace, int tiles,
                             int slices = 4);

}  // namespace fpx
