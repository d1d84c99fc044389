#include "scc.h"

#include <algorithm>

namespace pap::detail {

std::pair<int, std::vector<int>> scc_components(
    const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stk;
  std::vector<char> on_stk(n, 0);
  int counter = 0, ncomp = 0;
  struct It {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<It> call{{root, 0}};
    num[root] = low[root] = counter++;
    stk.push_back(root);
    on_stk[root] = 1;
    while (!call.empty()) {
      It& top = call.back();
      if (top.edge < adj[top.v].size()) {
        int w = adj[top.v][top.edge++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stk.push_back(w);
          on_stk[w] = 1;
          call.push_back({w, 0});
        } else if (on_stk[w]) {
          low[top.v] = std::min(low[top.v], num[w]);
        }
      } else {
        int v = top.v;
        call.pop_back();
        if (!call.empty())
          low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == num[v]) {
          while (true) {
            int w = stk.back();
            stk.pop_back();
            on_stk[w] = 0;
            comp[w] = ncomp;
            if (w == v) break;
          }
          ncomp++;
        }
      }
    }
  }
  return {ncomp, std::move(comp)};
}

}  // namespace pap::detail
