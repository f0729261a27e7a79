#include "fpx/pipeline.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "fpx/error.hpp"

namespace fpx {

const char* engine_name(PipeEngine e) {
    switch (e) {
        case PipeEngine::CopyAsync: return "copy-async";
        case PipeEngine::DequantLds: return "dequant+lds";
        case PipeEngine::Mma: return "mma";
        case PipeEngine::Sync: return "sync";
    }
    return "?";
}

PipelineTrace pipeline_schedule(int tiles, int slices) {
    if (tiles < 0 || slices < 2)
        throw Error(ErrorCode::InvalidValue, "need tiles >= 0 and slices >= 2");

    PipelineTrace trace;
    if (tiles == 0) return trace;

    trace.push_back({0, PipeEngine::CopyAsync, -1, 0});
    for (int t = 0; t < tiles; ++t) {
        const int base = 1 + t * slices;  // dequant(t, 0) lands here
        if (t + 1 < tiles)
            trace.push_back({base, PipeEngine::CopyAsync, -1, t + 1});
        for (int k = 0; k < slices; ++k) {
            trace.push_back({base + k, PipeEngine::DequantLds, k, t});
            trace.push_back({base + k + 1, PipeEngine::Mma, k, t});
        }
        if (t + 1 < tiles)  // barrier at the end of slice slices-2
            trace.push_back({base + slices, PipeEngine::Sync, -1, t});
    }
    std::stable_sort(trace.begin(), trace.end(),
                     [](const PipelineEvent& a, const PipelineEvent& b) {
                         return a.time < b.time;
                     });
    return trace;
}

void validate_pipeline_trace(const PipelineTrace& trace, int tiles,
                             int slices) {
    auto fail = [](const std::string& msg) {
        throw Error(ErrorCode::InvalidValue, "pipeline trace: " + msg);
    };

    std::map<std::pair<int, int>, int> dequant_time, mma_time;
    std::map<int, int> sync_time, copy_time;
    for (const auto& ev : trace) {
        switch (ev.engine) {
            case PipeEngine::DequantLds:
                if (!dequant_time.emplace(std::pair{ev.tile, ev.slice}, ev.time)
                         .second)
                    fail("duplicate dequant event");
                break;
            case PipeEngine::Mma:
                if (!mma_time.emplace(std::pair{ev.tile, ev.slice}, ev.time)
                         .second)
                    fail("duplicate mma event");
                break;
            case PipeEngine::Sync:
                sync_time[ev.tile] = ev.time;
                break;
            case PipeEngine::CopyAsync:
                copy_time[ev.tile] = ev.time;
                break;
        }
    }

    if (tiles > 0 && dequant_time.size() != size_t(tiles) * slices)
        fail("expected " + std::to_string(size_t(tiles) * slices) +
             " dequant events");
    if (mma_time.size() != dequant_time.size())
        fail("dequant/mma event counts differ");

    for (int t = 0; t < tiles; ++t) {
        for (int k = 0; k < slices; ++k) {
            const auto dq = dequant_time.find({t, k});
            const auto mm = mma_time.find({t, k});
            if (dq == dequant_time.end() || mm == mma_time.end())
                fail("missing events for tile " + std::to_string(t) +
                     " slice " + std::to_string(k));
            if (mm->second <= dq->second)
                fail("mma before dequant at tile " + std::to_string(t) +
                     " slice " + std::to_string(k));
            if (k + 1 < slices &&
                dequant_time.at({t, k + 1}) != mm->second)
                fail("dequant(k+1) not co-scheduled with mma(k) at tile " +
                     std::to_string(t) + " slice " + std::to_string(k));
        }
        if (copy_time.find(t) == copy_time.end())
            fail("missing copy-async for tile " + std::to_string(t));
        if (copy_time.at(t) > dequant_time.at({t, 0}))
            fail("copy-async after first dequant of tile " + std::to_string(t));

        if (t + 1 < tiles) {
            const auto sy = sync_time.find(t);
            if (sy == sync_time.end())
                fail("missing sync between tiles " + std::to_string(t) +
                     " and " + std::to_string(t + 1));
            if (sy->second != mma_time.at({t, slices - 2}))
                fail("sync not issued at the end of slice " +
                     std::to_string(slices - 2) + " of tile " +
                     std::to_string(t));
            if (sy->second >= dequant_time.at({t + 1, 0}))
                fail("sync does not precede the first dequant of tile " +
                     std::to_string(t + 1));
        }
    }
}

}  // namespace fpx
