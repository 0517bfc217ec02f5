#include "desmoke/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace desmoke {

bool Tensor::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    require(a.n == b.n && a.h == b.h && a.w == b.w, ErrorKind::shape,
            "concat_channels: spatial/batch dims differ");
    Tensor out(a.n, a.c + b.c, a.h, a.w);
    for (int ni = 0; ni < a.n; ++ni) {
        std::memcpy(out.plane(ni, 0), a.item(ni), a.item_size() * sizeof(double));
        std::memcpy(out.plane(ni, a.c), b.item(ni), b.item_size() * sizeof(double));
    }
    return out;
}

void split_channels(const Tensor& dy, Tensor& da, Tensor& db) {
    require(dy.c == da.c + db.c && dy.n == da.n && dy.h == da.h && dy.w == da.w,
            ErrorKind::shape, "split_channels: shape mismatch");
    for (int ni = 0; ni < dy.n; ++ni) {
        std::memcpy(da.item(ni), dy.plane(ni, 0), da.item_size() * sizeof(double));
        std::memcpy(db.item(ni), dy.plane(ni, da.c), db.item_size() * sizeof(double));
    }
}

}  // namespace desmoke
