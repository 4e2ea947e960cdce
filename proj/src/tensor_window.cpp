#include "homcert/tensor_window.hpp"

#include "homcert/error.hpp"

#include <algorithm>
#include <string>

namespace homcert {

namespace {

/// out += scale * (I_before (x) m (x) I_after) in, where m is dout x din.
void mode_apply(const PrimeField& f, const Matrix& m, std::size_t before, std::size_t din, std::size_t dout, std::size_t after,
                const Scalar* in, Scalar* out, Scalar scale)
{
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (const auto& e : m.row(r)) {
            const Scalar s = f.mul(scale, e.value);
            for (std::size_t b = 0; b < before; ++b) {
                const Scalar* src = in + (b * din + e.col) * after;
                Scalar* dst = out + (b * dout + r) * after;
                for (std::size_t a = 0; a < after; ++a)
                    if (src[a] != 0)
                        dst[a] = f.add(dst[a], f.mul(s, src[a]));
            }
        }
    }
}

void mode_triplets(const Matrix& m, std::size_t before, std::size_t din, std::size_t dout, std::size_t after,
                   std::size_t row_offset, std::size_t col_offset, Scalar scale, const PrimeField& f, std::vector<Triplet>& out)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& e : m.row(r)) {
            const Scalar s = f.mul(scale, e.value);
            for (std::size_t b = 0; b < before; ++b)
                for (std::size_t a = 0; a < after; ++a)
                    out.push_back({row_offset + (b * dout + r) * after + a, col_offset + (b * din + e.col) * after + a, s});
        }
}

void compositions(std::size_t n, int total, int top, std::vector<int>& current, std::vector<std::vector<int>>& out)
{
    const std::size_t slot = current.size();
    if (slot + 1 == n) {
        if (total <= top) {
            current.push_back(total);
            out.push_back(current);
            current.pop_back();
        }
        return;
    }
    for (int l = 0; l <= std::min(top, total); ++l) {
        current.push_back(l);
        compositions(n, total - l, top, current, out);
        current.pop_back();
    }
}

/// (s_{n-1}, ..., s_1) for partial sums s_k = l_1 + ... + l_k: the order in
/// which ((I (x) I) (x) I) ... lists its summands.
std::vector<int> iterated_key(const std::vector<int>& index)
{
    std::vector<int> partial(index.size() > 0 ? index.size() - 1 : 0);
    int s = 0;
    for (std::size_t k = 0; k < partial.size(); ++k) {
        s += index[k];
        partial[partial.size() - 1 - k] = s;
    }
    return partial;
}

} // namespace

TensorPowerWindow::TensorPowerWindow(const CochainComplex& i, std::size_t n, int lo, int hi)
    : field_(i.field()), factor_algebra_(i.algebra()), n_(n), lo_(lo), hi_(hi), top_(i.hi())
{
    if (i.lo() != 0)
        throw Error(ErrorCode::invalid_argument, "tensor window needs a complex starting in degree 0");
    if (n == 0 || lo < 0 || hi < lo)
        throw Error(ErrorCode::invalid_argument, "tensor window needs n >= 1 and 0 <= lo <= hi");
    const std::size_t da = factor_algebra_.dim();
    for (int l = 0; l <= top_; ++l) {
        term_dims_.push_back(i.dim(l));
        slot_differentials_.push_back(i.differential(l));
        const Matrix id = Matrix::identity(field_, i.dim(l));
        std::vector<Matrix> actions;
        std::vector<char> identity;
        for (std::size_t u = 0; u < da; ++u) {
            actions.push_back(i.module(l).action(u));
            identity.push_back(actions.back() == id ? 1 : 0);
        }
        slot_actions_.push_back(std::move(actions));
        slot_identity_.push_back(std::move(identity));
    }
    for (int t = lo; t <= hi + 1; ++t) {
        Layout lay;
        std::vector<std::vector<int>> comps;
        std::vector<int> current;
        compositions(n, t, top_, current, comps);
        std::stable_sort(comps.begin(), comps.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
            return iterated_key(a) < iterated_key(b);
        });
        for (auto& c : comps) {
            std::size_t d = 1;
            for (int l : c)
                d *= term_dims_[static_cast<std::size_t>(l)];
            lay.lookup.emplace(c, lay.summands.size());
            lay.summands.push_back(Summand{std::move(c), lay.dim, d});
            lay.dim += d;
        }
        layouts_.push_back(std::move(lay));
    }
}

const TensorPowerWindow::Layout& TensorPowerWindow::layout(int t) const
{
    if (t < lo_ || t > hi_ + 1)
        throw Error(ErrorCode::index_out_of_range, "degree " + std::to_string(t) + " outside the tensor window");
    return layouts_[static_cast<std::size_t>(t - lo_)];
}

void TensorPowerWindow::check_slot(std::size_t j) const
{
    if (j < 1 || j > n_)
        throw Error(ErrorCode::index_out_of_range, "factor index " + std::to_string(j) + " outside 1.." + std::to_string(n_));
}

std::size_t TensorPowerWindow::dim(int t) const { return layout(t).dim; }

const std::vector<Summand>& TensorPowerWindow::summands(int t) const { return layout(t).summands; }

const Summand& TensorPowerWindow::summand(std::span<const int> index) const
{
    int t = 0;
    for (int l : index)
        t += l;
    if (index.size() == n_ && t >= lo_ && t <= hi_ + 1) {
        const Layout& lay = layout(t);
        const auto it = lay.lookup.find(std::vector<int>(index.begin(), index.end()));
        if (it != lay.lookup.end())
            return lay.summands[it->second];
    }
    throw Error(ErrorCode::index_out_of_range, "no summand with this multi-index in the window");
}

Matrix TensorPowerWindow::differential(int t) const
{
    if (t < lo_ || t > hi_)
        throw Error(ErrorCode::index_out_of_range, "differential d^" + std::to_string(t) + " outside the tensor window");
    const Layout& src = layout(t);
    const Layout& dst = layout(t + 1);
    std::vector<Triplet> trip;
    trip.reserve(differential_nnz_bound(t));
    for (const auto& s : src.summands) {
        std::vector<int> target = s.index;
        std::size_t before = 1;
        int prefix = 0;
        for (std::size_t m = 0; m < n_; ++m) {
            const int l = s.index[m];
            const std::size_t din = term_dims_[static_cast<std::size_t>(l)];
            std::size_t after = s.dim == 0 ? 0 : s.dim / (before * din);
            if (l < top_) {
                target[m] = l + 1;
                const Summand& d = dst.summands[dst.lookup.at(target)];
                target[m] = l;
                const std::size_t dout = term_dims_[static_cast<std::size_t>(l + 1)];
                mode_triplets(slot_differentials_[static_cast<std::size_t>(l)], before, din, dout, after, d.offset, s.offset,
                              field_.sign(prefix), field_, trip);
            }
            before *= din;
            prefix += l;
        }
    }
    return Matrix::from_triplets(field_, dst.dim, src.dim, std::move(trip));
}

std::size_t TensorPowerWindow::differential_nnz_bound(int t) const
{
    std::size_t total = 0;
    for (const auto& s : layout(t).summands)
        for (std::size_t m = 0; m < n_; ++m) {
            const auto l = static_cast<std::size_t>(s.index[m]);
            if (static_cast<int>(l) < top_ && term_dims_[l] > 0)
                total += s.dim / term_dims_[l] * slot_differentials_[l].nnz();
        }
    return total;
}

Vec TensorPowerWindow::apply_differential(int t, std::span<const Scalar> v) const
{
    if (t < lo_ || t > hi_)
        throw Error(ErrorCode::index_out_of_range, "differential d^" + std::to_string(t) + " outside the tensor window");
    const Layout& src = layout(t);
    const Layout& dst = layout(t + 1);
    if (v.size() != src.dim)
        throw Error(ErrorCode::dimension_mismatch, "cochain does not match degree " + std::to_string(t));
    Vec out(dst.dim, 0);
    for (const auto& s : src.summands) {
        bool nonzero = false;
        for (std::size_t k = 0; k < s.dim && !nonzero; ++k)
            nonzero = v[s.offset + k] != 0;
        if (!nonzero)
            continue;
        std::vector<int> target = s.index;
        std::size_t before = 1;
        int prefix = 0;
        for (std::size_t m = 0; m < n_; ++m) {
            const int l = s.index[m];
            const std::size_t din = term_dims_[static_cast<std::size_t>(l)];
            const std::size_t after = s.dim / (before * din);
            if (l < top_) {
                target[m] = l + 1;
                const Summand& d = dst.summands[dst.lookup.at(target)];
                target[m] = l;
                mode_apply(field_, slot_differentials_[static_cast<std::size_t>(l)], before, din,
                           term_dims_[static_cast<std::size_t>(l + 1)], after, v.data() + s.offset, out.data() + d.offset,
                           field_.sign(prefix));
            }
            before *= din;
            prefix += l;
        }
    }
    return out;
}

Matrix TensorPowerWindow::factor_action(int t, std::size_t j, std::span<const Scalar> r) const
{
    check_slot(j);
    if (r.size() != factor_algebra_.dim())
        throw Error(ErrorCode::dimension_mismatch, "element does not belong to the factor algebra");
    const Layout& lay = layout(t);
    std::vector<Triplet> trip;
    for (const auto& s : lay.summands) {
        if (s.dim == 0)
            continue;
        std::size_t before = 1;
        for (std::size_t m = 0; m + 1 < j; ++m)
            before *= term_dims_[static_cast<std::size_t>(s.index[m])];
        const auto l = static_cast<std::size_t>(s.index[j - 1]);
        const std::size_t d = term_dims_[l];
        Matrix a(field_, d, d);
        for (std::size_t u = 0; u < r.size(); ++u)
            if (r[u] != 0)
                a = a + slot_actions_[l][u].scaled(r[u]);
        mode_triplets(a, before, d, d, s.dim / (before * d), s.offset, s.offset, 1, field_, trip);
    }
    return Matrix::from_triplets(field_, lay.dim, lay.dim, std::move(trip));
}

Vec TensorPowerWindow::apply_factor_action(int t, std::size_t j, std::span<const Scalar> r, std::span<const Scalar> v) const
{
    check_slot(j);
    if (r.size() != factor_algebra_.dim())
        throw Error(ErrorCode::dimension_mismatch, "element does not belong to the factor algebra");
    const Layout& lay = layout(t);
    if (v.size() != lay.dim)
        throw Error(ErrorCode::dimension_mismatch, "cochain does not match degree " + std::to_string(t));
    Vec out(lay.dim, 0);
    for (const auto& s : lay.summands) {
        if (s.dim == 0)
            continue;
        std::size_t before = 1;
        for (std::size_t m = 0; m + 1 < j; ++m)
            before *= term_dims_[static_cast<std::size_t>(s.index[m])];
        const auto l = static_cast<std::size_t>(s.index[j - 1]);
        const std::size_t d = term_dims_[l];
        for (std::size_t u = 0; u < r.size(); ++u)
            if (r[u] != 0)
                mode_apply(field_, slot_actions_[l][u], before, d, d, s.dim / (before * d), v.data() + s.offset,
                           out.data() + s.offset, r[u]);
    }
    return out;
}

Vec TensorPowerWindow::apply_ring_element(int t, std::span<const Scalar> element, std::span<const Scalar> v) const
{
    const std::size_t da = factor_algebra_.dim();
    std::size_t expected = 1;
    for (std::size_t k = 0; k < n_; ++k)
        expected *= da;
    if (element.size() != expected)
        throw Error(ErrorCode::dimension_mismatch, "element does not belong to the tensor power algebra");
    const Layout& lay = layout(t);
    if (v.size() != lay.dim)
        throw Error(ErrorCode::dimension_mismatch, "cochain does not match degree " + std::to_string(t));
    Vec out(lay.dim, 0);
    std::vector<std::size_t> digit(n_);
    for (std::size_t u = 0; u < element.size(); ++u) {
        if (element[u] == 0)
            continue;
        std::size_t rest = u;
        for (std::size_t m = n_; m-- > 0;) {
            digit[m] = rest % da;
            rest /= da;
        }
        for (const auto& s : lay.summands) {
            if (s.dim == 0)
                continue;
            Vec cur(v.begin() + static_cast<std::ptrdiff_t>(s.offset), v.begin() + static_cast<std::ptrdiff_t>(s.offset + s.dim));
            std::size_t before = 1;
            for (std::size_t m = 0; m < n_; ++m) {
                const auto l = static_cast<std::size_t>(s.index[m]);
                const std::size_t d = term_dims_[l];
                if (!slot_identity_[l][digit[m]]) {
                    Vec next(s.dim, 0);
                    mode_apply(field_, slot_actions_[l][digit[m]], before, d, d, s.dim / (before * d), cur.data(), next.data(), 1);
                    cur = std::move(next);
                }
                before *= d;
            }
            for (std::size_t k = 0; k < s.dim; ++k)
                if (cur[k] != 0)
                    out[s.offset + k] = field_.add(out[s.offset + k], field_.mul(element[u], cur[k]));
        }
    }
    return out;
}

Vec TensorPowerWindow::pure_tensor(std::span<const int> index, std::span<const Vec> factors) const
{
    const Summand& s = summand(index);
    if (factors.size() != n_)
        throw Error(ErrorCode::dimension_mismatch, "pure tensor needs one factor per slot");
    Vec acc{1};
    for (std::size_t m = 0; m < n_; ++m) {
        if (factors[m].size() != term_dims_[static_cast<std::size_t>(index[m])])
            throw Error(ErrorCode::dimension_mismatch, "factor " + std::to_string(m + 1) + " does not match its slot");
        acc = kron(field_, acc, factors[m]);
    }
    int t = 0;
    for (int l : index)
        t += l;
    Vec out(dim(t), 0);
    std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(s.offset));
    return out;
}

} // namespace homcert
