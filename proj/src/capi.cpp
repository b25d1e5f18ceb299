#include "fractop/fractop.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "fractop/analysis.hpp"
#include "fractop/error.hpp"
#include "fractop/quotient.hpp"
#include "fractop/svg.hpp"

struct fractop_ifs {
  fractop::IFSPtr ifs;
};

struct fractop_cellset {
  fractop::CellSet cells;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
fractop_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return FRACTOP_OK;
  } catch (const fractop::Error& e) {
    last_error = e.what();
    return static_cast<fractop_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FRACTOP_ERR_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FRACTOP_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fractop::fail(fractop::ErrorCode::InvalidInput, std::string("null ") + what);
}

fractop::ReportFormat to_format(fractop_format f) {
  return f == FRACTOP_FORMAT_JSON ? fractop::ReportFormat::Json : fractop::ReportFormat::Text;
}

}  // namespace

extern "C" {

const char* fractop_version(void) { return "1.0.0"; }

const char* fractop_last_error(void) { return last_error.c_str(); }

void fractop_string_free(char* s) { std::free(s); }

fractop_status fractop_ifs_preset(const char* name, fractop_ifs** out) {
  return guarded([&] {
    need(name, "preset name");
    need(out, "output handle");
    *out = new fractop_ifs{fractop::preset(name)};
  });
}

fractop_status fractop_ifs_parse(const char* text, fractop_ifs** out) {
  return guarded([&] {
    need(text, "ifs text");
    need(out, "output handle");
    *out = new fractop_ifs{fractop::parse_ifs(text)};
  });
}

void fractop_ifs_free(fractop_ifs* ifs) { delete ifs; }

size_t fractop_ifs_map_count(const fractop_ifs* ifs) { return ifs ? ifs->ifs->size() : 0; }

size_t fractop_ifs_dimension(const fractop_ifs* ifs) { return ifs ? ifs->ifs->dim() : 0; }

fractop_status fractop_ifs_format(const fractop_ifs* ifs, char** out) {
  return guarded([&] {
    need(ifs, "ifs");
    need(out, "output");
    *out = dup(fractop::format_ifs(*ifs->ifs));
  });
}

fractop_status fractop_ifs_lipschitz_sum(const fractop_ifs* ifs, char** out) {
  return guarded([&] {
    need(ifs, "ifs");
    need(out, "output");
    *out = dup(fractop::to_string(fractop::lipschitz_sum(*ifs->ifs)));
  });
}

fractop_status fractop_ifs_conditions(const fractop_ifs* ifs, int* injective, int* fixed_points_not_singleton,
                                      int* sum_below_one) {
  return guarded([&] {
    need(ifs, "ifs");
    auto c = fractop::check_conditions(*ifs->ifs);
    if (injective) *injective = c.injective;
    if (fixed_points_not_singleton) *fixed_points_not_singleton = c.fixed_points_not_singleton;
    if (sum_below_one) *sum_below_one = c.sum_below_one;
  });
}

fractop_status fractop_attractor(const fractop_ifs* ifs, size_t depth, uint64_t budget, fractop_cellset** out) {
  return guarded([&] {
    need(ifs, "ifs");
    need(out, "output handle");
    *out = new fractop_cellset{fractop::iterate_attractor(ifs->ifs, depth, budget)};
  });
}

void fractop_cellset_free(fractop_cellset* cells) { delete cells; }

size_t fractop_cellset_size(const fractop_cellset* cells) { return cells ? cells->cells.size() : 0; }

size_t fractop_cellset_level(const fractop_cellset* cells) { return cells ? cells->cells.level() : 0; }

fractop_status fractop_cellset_export(const fractop_cellset* cells, char** out) {
  return guarded([&] {
    need(cells, "cell set");
    need(out, "output");
    *out = dup(fractop::export_cellset(cells->cells));
  });
}

fractop_status fractop_cellset_import(const char* text, fractop_cellset** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "output handle");
    *out = new fractop_cellset{fractop::import_cellset(text)};
  });
}

fractop_status fractop_cellset_max_diameter_squared(const fractop_cellset* cells, char** out) {
  return guarded([&] {
    need(cells, "cell set");
    need(out, "output");
    *out = dup(fractop::to_string(fractop::max_cell_diameter_squared(cells->cells)));
  });
}

fractop_status fractop_cellset_summary(const fractop_cellset* cells, char** out) {
  return guarded([&] {
    need(cells, "cell set");
    need(out, "output");
    const auto& cs = cells->cells;
    auto d2 = fractop::max_cell_diameter_squared(cs);
    auto sum = fractop::lipschitz_sum(*cs.ifs());
    std::string s;
    s += "ifs: " + cs.ifs()->name() + "\n";
    s += "level: " + std::to_string(cs.level()) + "\n";
    s += "cells: " + std::to_string(cs.size()) + "\n";
    s += "max_cell_diameter_squared: " + fractop::to_string(d2) + " (~" + fractop::to_decimal(d2) + ")\n";
    s += "lipschitz_sum: " + fractop::to_string(sum) + " (~" + fractop::to_decimal(sum) + ")\n";
    *out = dup(s);
  });
}

fractop_status fractop_cellset_components(const fractop_cellset* cells, size_t* count) {
  return guarded([&] {
    need(cells, "cell set");
    need(count, "output");
    *count = fractop::connected_components(fractop::build_adjacency(cells->cells)).count;
  });
}

fractop_status fractop_cellset_windows(const fractop_cellset* cells, size_t* count) {
  return guarded([&] {
    need(cells, "cell set");
    need(count, "output");
    *count = fractop::count_windows(cells->cells, cells->cells.ifs()->ambient());
  });
}

fractop_status fractop_find_arc(const fractop_cellset* cells, const char* p, const char* q, int* found,
                                char** polyline) {
  return guarded([&] {
    need(cells, "cell set");
    need(p, "p");
    need(q, "q");
    need(found, "output");
    need(polyline, "output");
    auto arc = fractop::find_arc(cells->cells, fractop::parse_point(p), fractop::parse_point(q));
    *found = arc.has_value();
    *polyline = nullptr;
    if (arc) {
      std::string s;
      for (const auto& v : *arc) s += fractop::to_string(v) + "\n";
      *polyline = dup(s);
    }
  });
}

fractop_status fractop_render_svg(const fractop_cellset* cells, const char* p, const char* q, char** svg) {
  return guarded([&] {
    need(cells, "cell set");
    need(svg, "output");
    std::optional<fractop::Polyline> arc;
    if (p || q) {
      need(p, "p");
      need(q, "q");
      arc = fractop::find_arc(cells->cells, fractop::parse_point(p), fractop::parse_point(q));
      if (!arc) {
        fractop::fail(fractop::ErrorCode::InvalidInput,
                      std::string("arc endpoints ") + p + " and " + q + " lie in different components");
      }
    }
    *svg = dup(fractop::render_svg(cells->cells, arc));
  });
}

fractop_status fractop_analyze(const fractop_ifs* ifs, size_t depth, uint64_t budget, fractop_format format,
                               char** report) {
  return guarded([&] {
    need(ifs, "ifs");
    need(report, "output");
    *report = dup(fractop::format_report(fractop::analyze(ifs->ifs, depth, budget), to_format(format)));
  });
}

fractop_status fractop_summary(const fractop_ifs* ifs, size_t depth, uint64_t budget, char** out) {
  return guarded([&] {
    need(ifs, "ifs");
    need(out, "output");
    auto r = fractop::analyze(ifs->ifs, depth, budget);
    std::string s = fractop::summarize_report(r);
    const auto cmts = fractop::preset("cmts");
    bool code_space = ifs->ifs->maps() == cmts->maps() && ifs->ifs->ambient() == cmts->ambient();
    s += "  collapse quotient   ";
    if (code_space) {
      s += "available (totally disconnected code space)\n";
    } else if (r.component_count == 1) {
      s += "unavailable (connected space)\n";
    } else {
      s += "not supported for this IFS\n";
    }
    *out = dup(s);
  });
}

fractop_status fractop_quotient(const fractop_ifs* ifs, size_t depth, const char* y_prefix, const char* q_word,
                                size_t iterations, fractop_format format, char** report, int* all_passed) {
  return guarded([&] {
    need(ifs, "ifs");
    need(report, "output");
    const auto cmts = fractop::preset("cmts");
    const auto& f = *ifs->ifs;
    if (!(f.maps() == cmts->maps() && f.ambient() == cmts->ambient())) {
      // Probe connectedness on a small approximation to phrase the refusal.
      std::size_t probe = 1;
      while (probe < 4 && f.size() > 0) {
        try {
          fractop::check_budget(f, probe + 1, 4096);
        } catch (const fractop::Error&) {
          break;
        }
        ++probe;
      }
      auto cells = fractop::iterate_attractor(ifs->ifs, probe, 4096);
      if (fractop::connected_components(fractop::build_adjacency(cells)).count == 1) {
        fractop::fail(fractop::ErrorCode::Refused,
                      "connected space: construction of the self-similar collapse quotient unavailable (" +
                          f.name() + " has one component at depth " + std::to_string(probe) + ")");
      }
      fractop::fail(fractop::ErrorCode::Unsupported,
                    "the collapse quotient is implemented on the Cantor middle-third code space only");
    }
    fractop::Address prefix = y_prefix ? fractop::Address::parse(y_prefix) : fractop::Address({1});
    std::optional<fractop::Address> q;
    if (q_word) q = fractop::Address::parse(q_word);
    auto run = fractop::iterate_quotients(iterations, depth, prefix, q);
    *report = dup(fractop::format_quotient_run(run, to_format(format)));
    if (all_passed) {
      *all_passed = 1;
      for (const auto& it : run) *all_passed &= it.passed() ? 1 : 0;
    }
  });
}

}  // extern "C"
