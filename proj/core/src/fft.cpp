#include "tvct/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace tvct::fft {

namespace {

// FFTW plan creation is not thread-safe and planning is not free, so plans
// are cached per size. Executions go through the new-array interface with
// FFTW_UNALIGNED plans, which makes plain vector storage acceptable.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_mutex;
std::map<int, PlanPair> g_plans2d;
std::map<int, PlanPair> g_plans1d;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

PlanPair& plans_2d(int n) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = g_plans2d.find(n);
    if (it != g_plans2d.end()) return it->second;
    cvec scratch(static_cast<std::size_t>(n) * n);
    PlanPair pp;
    pp.fwd = fftw_plan_dft_2d(n, n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_2d(n, n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    return g_plans2d.emplace(n, pp).first->second;
}

PlanPair& plans_1d(int len) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = g_plans1d.find(len);
    if (it != g_plans1d.end()) return it->second;
    cvec scratch(static_cast<std::size_t>(len));
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    return g_plans1d.emplace(len, pp).first->second;
}

}  // namespace

cvec dft2(const std::vector<double>& u, int n) {
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    if (n < 2 || u.size() != sz) throw std::invalid_argument("dft2: bad size");
    cvec buf(sz);
    for (std::size_t i = 0; i < sz; ++i) buf[i] = u[i];
    fftw_execute_dft(plans_2d(n).fwd, as_fftw(buf.data()), as_fftw(buf.data()));
    return buf;
}

std::vector<double> idft2(const cvec& spectrum, int n) {
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    if (n < 2 || spectrum.size() != sz) throw std::invalid_argument("idft2: bad size");
    cvec buf = spectrum;
    fftw_execute_dft(plans_2d(n).bwd, as_fftw(buf.data()), as_fftw(buf.data()));
    std::vector<double> out(sz);
    const double scale = 1.0 / static_cast<double>(sz);
    for (std::size_t i = 0; i < sz; ++i) out[i] = buf[i].real() * scale;
    return out;
}

cvec dft1(const cvec& v) {
    if (v.empty()) throw std::invalid_argument("dft1: empty input");
    cvec buf = v;
    fftw_execute_dft(plans_1d(static_cast<int>(v.size())).fwd, as_fftw(buf.data()),
                     as_fftw(buf.data()));
    return buf;
}

cvec idft1(const cvec& v) {
    if (v.empty()) throw std::invalid_argument("idft1: empty input");
    cvec buf = v;
    fftw_execute_dft(plans_1d(static_cast<int>(v.size())).bwd, as_fftw(buf.data()),
                     as_fftw(buf.data()));
    const double scale = 1.0 / static_cast<double>(v.size());
    for (auto& c : buf) c *= scale;
    return buf;
}

std::vector<double> apply_symbol(const std::vector<double>& u,
                                 const std::vector<double>& symbol, int n) {
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    if (u.size() != sz || symbol.size() != sz) throw std::invalid_argument("apply_symbol: bad size");
    cvec buf(sz);
    for (std::size_t i = 0; i < sz; ++i) buf[i] = u[i];
    auto& pp = plans_2d(n);
    fftw_execute_dft(pp.fwd, as_fftw(buf.data()), as_fftw(buf.data()));
    for (std::size_t i = 0; i < sz; ++i) buf[i] *= symbol[i];
    fftw_execute_dft(pp.bwd, as_fftw(buf.data()), as_fftw(buf.data()));
    std::vector<double> out(sz);
    const double scale = 1.0 / static_cast<double>(sz);
    for (std::size_t i = 0; i < sz; ++i) out[i] = buf[i].real() * scale;
    return out;
}

}  // namespace tvct::fft
