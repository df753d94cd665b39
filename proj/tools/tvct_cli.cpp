#include "tvct_cli.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tvct/array_file.hpp"
#include "tvct/diffops.hpp"
#include "tvct/fbp.hpp"
#include "tvct/precond.hpp"
#include "tvct/prox.hpp"
#include "tvct/radon.hpp"
#include "tvct/rebin.hpp"
#include "tvct/run_config.hpp"
#include "tvct/sim.hpp"
#include "tvct/solvers.hpp"

namespace tvct_cli {

namespace {

using namespace tvct;

RadonOp op_for(const SinoGeom& sg, int n, double h) {
    return RadonOp(ImageGeom(n, h), sg);
}

// Image-side geometry defaults when only a sinogram is at hand: n = m/2
// (the inverse of the forward default m = 2n), h = delta_s.
int default_n(const SinoGeom& sg, int n_flag) { return n_flag > 0 ? n_flag : sg.m_det / 2; }
double default_h(const SinoGeom& sg, double h_flag) { return h_flag > 0 ? h_flag : sg.delta_s; }

FilterKind parse_filter(const std::string& s) {
    if (s == "ram-lak") return FilterKind::RamLak;
    if (s == "shepp-logan") return FilterKind::SheppLogan;
    throw CLI::ValidationError("--filter", "unknown filter " + s);
}

struct ReconstructArgs {
    RunConfig cfg;
    int n = 0;
    double h = 0.0;
};

int cmd_reconstruct(const ReconstructArgs& args) {
    const RunConfig& cfg = args.cfg;
    Sinogram u0 = sinogram_from_array(read_array(cfg.input));
    const int n = default_n(u0.geom, args.n);
    const double h = default_h(u0.geom, args.h);
    RadonOp op = op_for(u0.geom, n, h);

    ConstraintMask mask(u0.geom);
    if (!cfg.mask_path.empty()) {
        mask = sino_mask_from_array(read_array(cfg.mask_path));
        if (!(mask.geom.m_det == u0.geom.m_det && mask.geom.n_angles() == u0.geom.n_angles()))
            throw std::invalid_argument("reconstruct: mask shape does not match the sinogram");
        mask.geom = u0.geom;
        if (!cfg.thresholds_path.empty()) {
            Sinogram th = sinogram_from_array(read_array(cfg.thresholds_path));
            if (th.data.size() != mask.thresholds.size())
                throw std::invalid_argument("reconstruct: thresholds shape mismatch");
            mask.thresholds = th.data;
        } else {
            for (std::size_t i = 0; i < mask.mask.size(); ++i)
                if (mask.mask[i]) mask.thresholds[i] = cfg.c_fraction * u0.data[i];
        }
    }

    DataFidelityVariant variant = DataFidelityVariant::soft();
    if (cfg.variant == "soft")
        variant = DataFidelityVariant::soft();
    else if (cfg.variant == "hard")
        variant = DataFidelityVariant::hard();
    else if (cfg.variant == "ignore")
        variant = DataFidelityVariant::ignore();
    else if (cfg.variant == "fitall")
        variant = DataFidelityVariant::fit_everywhere();
    else
        throw std::invalid_argument("reconstruct: unknown variant " + cfg.variant);

    PrecondKind pk;
    if (cfg.precond == "richardson")
        pk = PrecondKind::Richardson;
    else if (cfg.precond == "invnorm")
        pk = PrecondKind::InverseNorm;
    else if (cfg.precond == "impulse")
        pk = PrecondKind::Impulse;
    else if (cfg.precond == "circulant")
        pk = PrecondKind::Circulant;
    else
        throw std::invalid_argument("reconstruct: unknown preconditioner " + cfg.precond);

    Image init(op.image_geom);
    if (cfg.warm_start_fbp) init = fbp_reconstruct(u0, op, FilterKind::RamLak);

    ProblemSpec prob;
    prob.u0 = u0;
    prob.mask = mask;
    prob.lambda = cfg.lambda;
    prob.variant = variant;
    prob.nonneg = (cfg.solver == "pdrq-nonneg");
    prob.tau_grad = cfg.tau;
    prob.op = op;
    if (cfg.rescale) {
        RescaledOp rs = rescale_to_unit(op);
        prob.op = rs.op;
        prob.u0 *= 1.0 / rs.beta;
        prob.lambda /= rs.beta * rs.beta;
        for (auto& t : prob.mask.thresholds) t /= rs.beta;
    }

    SolverParams params;
    params.sigma = cfg.sigma;
    params.mu = cfg.mu;
    params.nu = cfg.nu;
    params.max_iter = cfg.iters;
    params.tol = cfg.tol;
    params.admm_mu = cfg.admm_mu;
    params.pcg_iters = cfg.pcg_iters;
    params.trace_every = cfg.trace_every;

    SolveResult result;
    if (cfg.solver == "cp") {
        params.sigma = cfg.cp_sigma;
        params.tau_step = cfg.cp_tau;
        result = chambolle_pock(prob, params, init);
    } else if (cfg.solver == "pdrq1" || cfg.solver == "pdrq2" || cfg.solver == "pdrq3") {
        const PdrqSplitting split = cfg.solver == "pdrq1"   ? PdrqSplitting::PDRQ1
                                    : cfg.solver == "pdrq2" ? PdrqSplitting::PDRQ2
                                                            : PdrqSplitting::PDRQ3;
        const auto [alpha, beta] = pdrq_precond_coefficients(split, params, prob.tau_grad);
        PrecondSpec precond = calibrate(make_precond(pk, alpha, beta), prob.op, 200, cfg.seed);
        result = pdrq(prob, params, precond, split, init);
    } else if (cfg.solver == "pdrq-nonneg") {
        const double a = params.sigma * params.sigma;
        const double b = a * prob.tau_grad * prob.tau_grad;
        PrecondSpec precond =
            calibrate(make_precond(PrecondKind::InverseNorm, a, b), prob.op, 200, cfg.seed);
        result = pdrq_nonneg(prob, params, precond, init);
    } else if (cfg.solver == "admm") {
        PrecondSpec precond = calibrate(
            make_precond(pk, 1.0, prob.tau_grad * prob.tau_grad), prob.op, 200, cfg.seed);
        result = admm(prob, params, precond, init);
    } else {
        throw std::invalid_argument("reconstruct: unknown solver " + cfg.solver);
    }

    write_array(to_array(result.image), cfg.output);
    if (!cfg.trace_path.empty())
        write_trace_csv(result.trace, cfg.trace_path, config_items(cfg));
    std::cerr << "reconstruct: " << result.iterations << " iterations, objective "
              << (result.trace.records.empty() ? objective(result.image, prob)
                                               : result.trace.records.back().objective)
              << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"TV-regularized CT reconstruction toolkit"};
    app.require_subcommand(1);
    // --h is the grid-spacing option on several subcommands, so help gets
    // the long form only.
    app.set_help_flag("--help", "print help");

    // ---- phantom ----
    auto* sc_phantom = app.add_subcommand("phantom", "emit a Shepp-Logan phantom image");
    int ph_n = 64;
    double ph_h = 1.0;
    bool ph_metal = false, ph_metal_ellipse = false;
    double ph_metal_value = 3.0, ph_metal_cx = 0.3, ph_metal_cy = -0.25, ph_metal_half = 0.0625;
    std::string ph_out = "-", ph_region_out;
    sc_phantom->add_option("--n", ph_n, "pixels per side")->capture_default_str();
    sc_phantom->add_option("--h", ph_h, "grid spacing")->capture_default_str();
    sc_phantom->add_flag("--metal", ph_metal, "insert the metal block");
    sc_phantom->add_flag("--metal-ellipse", ph_metal_ellipse, "elliptical metal region");
    sc_phantom->add_option("--metal-value", ph_metal_value)->capture_default_str();
    sc_phantom->add_option("--metal-cx", ph_metal_cx)->capture_default_str();
    sc_phantom->add_option("--metal-cy", ph_metal_cy)->capture_default_str();
    sc_phantom->add_option("--metal-half", ph_metal_half, "region half-width, unit coords")
        ->capture_default_str();
    sc_phantom->add_option("-o,--output", ph_out, "output image (- = stdout)")
        ->capture_default_str();
    sc_phantom->add_option("--region-out", ph_region_out, "write the metal region mask here");

    // ---- forward / adjoint ----
    auto* sc_forward = app.add_subcommand("forward", "apply the discrete Radon transform");
    auto* sc_adjoint = app.add_subcommand("adjoint", "apply the backprojection");
    std::string fw_in = "-", fw_out = "-";
    int fw_angles = 180, fw_bins = 0;
    double fw_ds = 0.0;
    sc_forward->add_option("-i,--input", fw_in)->capture_default_str();
    sc_forward->add_option("-o,--output", fw_out)->capture_default_str();
    sc_forward->add_option("--angles", fw_angles, "number of projection angles")
        ->capture_default_str();
    sc_forward->add_option("--bins", fw_bins, "detector bins (default 2n)");
    sc_forward->add_option("--ds", fw_ds, "bin spacing (default h)");
    std::string adj_in = "-", adj_out = "-";
    int adj_n = 0;
    double adj_h = 0.0;
    sc_adjoint->add_option("-i,--input", adj_in)->capture_default_str();
    sc_adjoint->add_option("-o,--output", adj_out)->capture_default_str();
    sc_adjoint->add_option("--n", adj_n, "image size (default bins/2)");
    sc_adjoint->add_option("--h", adj_h, "grid spacing (default ds)");

    // ---- fbp ----
    auto* sc_fbp = app.add_subcommand("fbp", "filtered backprojection");
    std::string fbp_in = "-", fbp_out = "-", fbp_filter = "ram-lak";
    int fbp_n = 0;
    double fbp_h = 0.0;
    sc_fbp->add_option("-i,--input", fbp_in)->capture_default_str();
    sc_fbp->add_option("-o,--output", fbp_out)->capture_default_str();
    sc_fbp->add_option("--filter", fbp_filter, "ram-lak | shepp-logan")->capture_default_str();
    sc_fbp->add_option("--n", fbp_n, "image size (default bins/2)");
    sc_fbp->add_option("--h", fbp_h, "grid spacing (default ds)");

    // ---- noise ----
    auto* sc_noise = app.add_subcommand("noise", "add Gaussian noise to a sinogram");
    std::string no_in = "-", no_out = "-";
    double no_pct = 0.05;
    std::uint64_t no_seed = 1;
    sc_noise->add_option("-i,--input", no_in)->capture_default_str();
    sc_noise->add_option("-o,--output", no_out)->capture_default_str();
    sc_noise->add_option("--pct", no_pct, "noise std as a fraction of data std")
        ->capture_default_str();
    sc_noise->add_option("--seed", no_seed)->capture_default_str();

    // ---- cap ----
    auto* sc_cap = app.add_subcommand("cap", "cap a sinogram and emit the exceedance mask");
    std::string cap_in = "-", cap_out = "-", cap_mask_out;
    double cap_value = 0.0, cap_cfrac = 0.8;
    sc_cap->add_option("-i,--input", cap_in)->capture_default_str();
    sc_cap->add_option("-o,--output", cap_out)->capture_default_str();
    sc_cap->add_option("--cap", cap_value, "capping threshold")->required();
    sc_cap->add_option("--c-fraction", cap_cfrac, "constraint C as fraction of capped value")
        ->capture_default_str();
    sc_cap->add_option("--mask-out", cap_mask_out, "write the mask here");

    // ---- mask-estimate ----
    auto* sc_mask = app.add_subcommand("mask-estimate", "estimate the metal trace mask");
    std::string me_in = "-", me_out = "-";
    double me_threshold = 1.5, me_cfrac = 0.8, me_h = 0.0;
    int me_dilate = 5, me_n = 0;
    sc_mask->add_option("-i,--input", me_in)->capture_default_str();
    sc_mask->add_option("-o,--output", me_out)->capture_default_str();
    sc_mask->add_option("--threshold", me_threshold, "image-domain density threshold")
        ->capture_default_str();
    sc_mask->add_option("--dilate", me_dilate, "dilation radius in pixels")->capture_default_str();
    sc_mask->add_option("--c-fraction", me_cfrac)->capture_default_str();
    sc_mask->add_option("--n", me_n, "image size (default bins/2)");
    sc_mask->add_option("--h", me_h, "grid spacing (default ds)");

    // ---- reconstruct ----
    auto* sc_rec = app.add_subcommand("reconstruct", "iterative TV-regularized reconstruction");
    ReconstructArgs rec;
    std::string rec_config;
    sc_rec->add_option("--config", rec_config, "JSON config file (flags take precedence)");
    // pre-scan for --config so file values become the flag defaults
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") rec.cfg = tvct::load_run_config(argv[i + 1]);
    sc_rec->add_option("-i,--input", rec.cfg.input, "sinogram file");
    sc_rec->add_option("-o,--output", rec.cfg.output, "image file");
    sc_rec->add_option("--solver", rec.cfg.solver, "cp|pdrq1|pdrq2|pdrq3|pdrq-nonneg|admm")
        ->capture_default_str();
    sc_rec->add_option("--precond", rec.cfg.precond, "richardson|invnorm|impulse|circulant")
        ->capture_default_str();
    sc_rec->add_option("--variant", rec.cfg.variant, "soft|hard|ignore|fitall")
        ->capture_default_str();
    sc_rec->add_option("--lambda", rec.cfg.lambda)->capture_default_str();
    sc_rec->add_option("--sigma", rec.cfg.sigma, "Douglas-Rachford step")->capture_default_str();
    sc_rec->add_option("--tau", rec.cfg.tau, "gradient scaling")->capture_default_str();
    sc_rec->add_option("--cp-sigma", rec.cfg.cp_sigma, "CP primal step (0 = auto)")
        ->capture_default_str();
    sc_rec->add_option("--cp-tau", rec.cfg.cp_tau, "CP dual step (0 = auto)")
        ->capture_default_str();
    sc_rec->add_option("--mu", rec.cfg.mu)->capture_default_str();
    sc_rec->add_option("--nu", rec.cfg.nu)->capture_default_str();
    sc_rec->add_option("--admm-mu", rec.cfg.admm_mu)->capture_default_str();
    sc_rec->add_option("--pcg-iters", rec.cfg.pcg_iters)->capture_default_str();
    sc_rec->add_option("--iters", rec.cfg.iters)->capture_default_str();
    sc_rec->add_option("--tol", rec.cfg.tol)->capture_default_str();
    sc_rec->add_option("--seed", rec.cfg.seed)->capture_default_str();
    sc_rec->add_option("--trace-every", rec.cfg.trace_every)->capture_default_str();
    bool rec_no_rescale = false;
    sc_rec->add_flag("--no-rescale", rec_no_rescale, "skip the 1/beta operator rescaling");
    sc_rec->add_flag("--warm-start-fbp", rec.cfg.warm_start_fbp, "initialize from FBP");
    sc_rec->add_option("--c-fraction", rec.cfg.c_fraction)->capture_default_str();
    sc_rec->add_option("--mask", rec.cfg.mask_path, "constraint mask file");
    sc_rec->add_option("--thresholds", rec.cfg.thresholds_path, "per-entry C sinogram file");
    sc_rec->add_option("--trace", rec.cfg.trace_path, "convergence trace CSV");
    sc_rec->add_option("--n", rec.n, "image size (default bins/2)");
    sc_rec->add_option("--h", rec.h, "grid spacing (default ds)");

    // ---- rebin ----
    auto* sc_rebin = app.add_subcommand("rebin", "fan-beam to parallel-beam rebinning");
    std::string rb_in = "-", rb_out = "-", rb_cov_out;
    double rb_d = 0.0, rb_alpha_spacing = 0.0, rb_phi0 = 0.0, rb_phi_span = 2.0 * std::numbers::pi;
    int rb_angles = 180, rb_bins = 0;
    double rb_ds = 1.0;
    sc_rebin->add_option("-i,--input", rb_in, "fan data (rows = exposures, cols = detectors)")
        ->capture_default_str();
    sc_rebin->add_option("-o,--output", rb_out)->capture_default_str();
    sc_rebin->add_option("--d", rb_d, "source-to-center distance")->required();
    sc_rebin->add_option("--alpha-spacing", rb_alpha_spacing,
                         "fan angle spacing (default: file meta)");
    sc_rebin->add_option("--phi0", rb_phi0, "first exposure angle")->capture_default_str();
    sc_rebin->add_option("--phi-span", rb_phi_span, "exposure angular span")->capture_default_str();
    sc_rebin->add_option("--angles", rb_angles, "target angle count")->capture_default_str();
    sc_rebin->add_option("--bins", rb_bins, "target bin count (default detector count)");
    sc_rebin->add_option("--ds", rb_ds, "target bin spacing")->capture_default_str();
    sc_rebin->add_option("--coverage-out", rb_cov_out, "write the coverage mask here");

    // ---- metrics ----
    auto* sc_metrics = app.add_subcommand("metrics", "RMSE between two images");
    std::string mt_a, mt_b, mt_exclude;
    sc_metrics->add_option("-a", mt_a, "first image")->required();
    sc_metrics->add_option("-b", mt_b, "second image")->required();
    sc_metrics->add_option("--exclude-mask", mt_exclude, "image-shaped exclusion mask");

    // ---- norm ----
    auto* sc_norm = app.add_subcommand("norm", "operator norm estimate and bound");
    int nm_n = 64, nm_angles = 90, nm_bins = 0, nm_iters = 100;
    double nm_h = 1.0, nm_ds = 0.0;
    std::uint64_t nm_seed = 7;
    sc_norm->add_option("--n", nm_n)->capture_default_str();
    sc_norm->add_option("--h", nm_h)->capture_default_str();
    sc_norm->add_option("--angles", nm_angles)->capture_default_str();
    sc_norm->add_option("--bins", nm_bins, "default 2n");
    sc_norm->add_option("--ds", nm_ds, "default h");
    sc_norm->add_option("--iters", nm_iters)->capture_default_str();
    sc_norm->add_option("--seed", nm_seed)->capture_default_str();

    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->set_help_flag("--help", "print help");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*sc_phantom) {
            PhantomSpec spec;
            spec.n = ph_n;
            spec.h = ph_h;
            MetalRegion region;
            region.is_ellipse = ph_metal_ellipse;
            region.cx = ph_metal_cx;
            region.cy = ph_metal_cy;
            region.half_w = region.half_h = ph_metal_half;
            region.value = ph_metal_value;
            Image u = shepp_logan(spec);
            if (ph_metal) u = insert_metal(u, region);
            write_array(to_array(u), ph_out);
            if (!ph_region_out.empty())
                write_array(to_array_mask(metal_region_mask(region, u.geom), u.geom),
                            ph_region_out);
        } else if (*sc_forward) {
            Image u = image_from_array(read_array(fw_in));
            const int bins = fw_bins > 0 ? fw_bins : 2 * u.geom.n;
            const double ds = fw_ds > 0 ? fw_ds : u.geom.h;
            RadonOp op(u.geom, uniform_sino_geom(fw_angles, bins, ds));
            write_array(to_array(forward(u, op)), fw_out);
        } else if (*sc_adjoint) {
            Sinogram v = sinogram_from_array(read_array(adj_in));
            RadonOp op = op_for(v.geom, default_n(v.geom, adj_n), default_h(v.geom, adj_h));
            write_array(to_array(adjoint(v, op)), adj_out);
        } else if (*sc_fbp) {
            Sinogram v = sinogram_from_array(read_array(fbp_in));
            RadonOp op = op_for(v.geom, default_n(v.geom, fbp_n), default_h(v.geom, fbp_h));
            write_array(to_array(fbp_reconstruct(v, op, parse_filter(fbp_filter))), fbp_out);
        } else if (*sc_noise) {
            Sinogram v = sinogram_from_array(read_array(no_in));
            write_array(to_array(add_noise(v, no_pct, no_seed)), no_out);
        } else if (*sc_cap) {
            Sinogram v = sinogram_from_array(read_array(cap_in));
            CappedSinogram capped = cap_sinogram(v, cap_value, cap_cfrac);
            write_array(to_array(capped.data), cap_out);
            if (!cap_mask_out.empty()) write_array(to_array_mask(capped.mask), cap_mask_out);
        } else if (*sc_mask) {
            Sinogram v = sinogram_from_array(read_array(me_in));
            RadonOp op = op_for(v.geom, default_n(v.geom, me_n), default_h(v.geom, me_h));
            MetalMaskEstimate est = estimate_metal_mask(v, op, me_threshold, me_dilate, me_cfrac);
            if (est.empty_detection)
                std::cerr << "mask-estimate: warning: nothing above the threshold, mask is empty\n";
            write_array(to_array_mask(est.mask), me_out);
        } else if (*sc_rec) {
            if (rec_no_rescale) rec.cfg.rescale = false;
            if (rec.cfg.input.empty() || rec.cfg.output.empty())
                throw std::invalid_argument("reconstruct: -i and -o are required");
            return cmd_reconstruct(rec);
        } else if (*sc_rebin) {
            ArrayData fan_file = read_array(rb_in);
            if (fan_file.kind == ArrayKind::Mask) throw std::invalid_argument("rebin: bad input kind");
            const int n_exp = static_cast<int>(fan_file.rows);
            const int n_det = static_cast<int>(fan_file.cols);
            const double da = rb_alpha_spacing > 0 ? rb_alpha_spacing : fan_file.meta;
            if (!(da > 0)) throw std::invalid_argument("rebin: need a positive alpha spacing");
            std::vector<double> alphas(n_det), phis(n_exp);
            for (int c = 0; c < n_det; ++c) alphas[c] = (c - 0.5 * (n_det - 1)) * da;
            for (int e = 0; e < n_exp; ++e) phis[e] = rb_phi0 + rb_phi_span * e / n_exp;
            FanGeom fan(rb_d, std::move(alphas), std::move(phis));
            std::vector<double> fan_data(fan_file.payload.begin(), fan_file.payload.end());
            const int bins = rb_bins > 0 ? rb_bins : n_det;
            SinoGeom target = uniform_sino_geom(rb_angles, bins, rb_ds);
            RebinResult r = rebin_fan2para(fan_data, fan, target);
            write_array(to_array(r.sino), rb_out);
            if (!rb_cov_out.empty()) {
                ConstraintMask cov(target);
                for (std::size_t i = 0; i < r.covered.size(); ++i) cov.mask[i] = !r.covered[i];
                write_array(to_array_mask(cov), rb_cov_out);
            }
        } else if (*sc_metrics) {
            Image a = image_from_array(read_array(mt_a));
            Image b = image_from_array(read_array(mt_b));
            std::vector<std::uint8_t> exclude;
            if (!mt_exclude.empty()) exclude = image_mask_from_array(read_array(mt_exclude));
            std::cout << "rmse = " << masked_rmse(a, b, exclude) << "\n";
        } else if (*sc_norm) {
            const int bins = nm_bins > 0 ? nm_bins : 2 * nm_n;
            const double ds = nm_ds > 0 ? nm_ds : nm_h;
            RadonOp op(ImageGeom(nm_n, nm_h), uniform_sino_geom(nm_angles, bins, ds));
            std::cout << "power-iteration estimate = " << estimate_norm(op, nm_iters, nm_seed)
                      << "\n";
            try {
                std::cout << "lemma bound = " << norm_bound(op) << "\n";
            } catch (const std::invalid_argument&) {
                std::cout << "lemma bound = n/a (delta_s >= h*sqrt(2))\n";
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace tvct_cli
