#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "fgc/modular.hpp"
#include "fgc/poly.hpp"
#include "fgc/rat.hpp"
#include "fgc/series.hpp"

namespace fgc {

/* Key order is meaningful: reports are dumped insertion-ordered so equal
   inputs produce byte-identical artifacts. */
using Json = nlohmann::ordered_json;

/* "1", "c4", "c4^2*c6": '*'-joined factors, '^' only for exponents > 1. */
std::string mono_str(const Mono& m);
Mono mono_parse(const std::string& s);

/* Exact rationals travel as strings ("3", "-1/2"); see rat_str/rat_parse. */
Json rat_json(const Rat& r);
Rat rat_from_json(const Json& j);

/* {"<mono>": "<rat>", ...} in graded-lex term order; {} is zero. */
Json poly_json(const GradedPoly& p);
GradedPoly poly_from_json(const Json& j);

/* {"nvars": n, "trunc": N, "terms": [[i, j, poly], ...]}. */
Json series_json(const TruncSeries& f);
TruncSeries series_from_json(const Json& j);

/* {"components": [{"weight": w, "form": poly}, ...], "qprec": Q}. */
Json dc_json(const DividedCongruence& dc);
DividedCongruence dc_from_json(const Json& j);

/* Two-space indent plus trailing newline; the single dump used everywhere. */
std::string dump_stable(const Json& j);

/* 64-bit FNV-1a, 16 lowercase hex digits. */
std::string fnv1a_hex(const std::string& data);

struct CacheStats {
  int hits = 0;
  int misses = 0;
  int repaired = 0;  // corrupt or stale entries recomputed and rewritten
};

/* CLI override first, then the FGC_CACHE_DIR environment variable; empty
   means caching is disabled (compute-only mode). */
std::string resolve_cache_root(const std::string& cli_override);

/* Content-addressed memo under root/<kind>-<fnv1a(kind, key)>.json. Entries
   store kind and key and are checked on read; a corrupt or mismatched entry
   is recomputed, rewritten (write-then-rename), and counted as repaired.
   With FGC_CACHE_PARANOID set, hits are additionally verified byte-for-byte
   against recomputation. Empty root computes directly. */
std::string cache_get_or_compute(const std::string& root,
                                 const std::string& kind,
                                 const std::string& key,
                                 const std::function<std::string()>& compute,
                                 CacheStats* stats = nullptr);

}  // namespace fgc
