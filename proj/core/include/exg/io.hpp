#ifndef EXG_IO_HPP
#define EXG_IO_HPP

#include <string>
#include <vector>

#include "exg/flows.hpp"
#include "exg/greens.hpp"

namespace exg {

// flat binary tables: magic, int32 header fields, float64 payload in
// canonical site/edge order
void save_green_table(const GreenTable& table, const std::string& path);
GreenTable load_green_table(const std::string& path);

void save_flow(const Flow& flow, const std::string& path);
Flow load_flow(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// cached Green table under cache_dir, keyed by (n, d)
GreenTable green_table_cached(int n, int d, const std::string& cache_dir);

}  // namespace exg

#endif
