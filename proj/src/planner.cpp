#include "hallway/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace hallway::planner {

int PlannerConfig::steps_per_primitive() const {
    const double ratio = primitive_duration / dt_sample;
    const int n = static_cast<int>(std::lround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9)
        throw std::invalid_argument("planner: primitive_duration must be a multiple of dt_sample");
    return n;
}

risk::RiskConfig PlannerConfig::effective_risk() const {
    risk::RiskConfig r = risk;
    r.goal_tolerance = goal_tolerance;
    if (!peek_enabled) r.c3 *= c3_block_factor;
    return r;
}

void PlannerConfig::validate() const {
    risk.validate();
    if (tree_depth < 1) throw std::invalid_argument("planner: tree_depth must be >= 1");
    if (replan_period <= 0.0 || replan_period > primitive_duration + 1e-12)
        throw std::invalid_argument("planner: replan_period must be in (0, primitive_duration]");
    if (goal_tolerance <= 0.0) throw std::invalid_argument("planner: goal_tolerance must be > 0");
    if (sensor_range <= 0.0) throw std::invalid_argument("planner: sensor_range must be > 0");
    if (inflation_radius < risk.robot_radius)
        throw std::invalid_argument("planner: inflation_radius must be >= robot_radius");
    if (c3_block_factor < 1.0)
        throw std::invalid_argument("planner: c3_block_factor must be >= 1");
    steps_per_primitive();
}

namespace {

// Search state threaded through the recursion. Losses are carried per
// prediction sample and finished into CVaRs only at the leaves, so each tree
// edge is evaluated once regardless of how many leaves share it.
struct SearchContext {
    const Pose2 goal;
    const world::Costmap& costmap;
    const std::vector<predict::PredictionFan>& fans;
    const predict::PhantomEnsemble& phantoms;
    const risk::RiskConfig risk;
    const PlannerConfig& cfg;
    double contact_dist;

    std::vector<dyn::MotionPrimitive> stack;
    std::vector<dyn::MotionPrimitive> best_sequence;
    double best_total = 0.0;
    double best_wsum = 0.0;
    bool have_best = false;
    long leaves = 0;
};

struct NodeLosses {
    std::vector<std::vector<double>> fan;  // per fan, per sample
    std::vector<double> phantom;
};

// Applies one primitive's states (indices base+1 .. base+n of the candidate
// trajectory) to the running per-sample losses. Returns false when the
// static cost saturates (lethal) and the branch should be pruned.
bool absorb_segment(const dyn::MotionPrimitive& prim, int base, SearchContext& ctx,
                    NodeLosses& losses, double& static_max) {
    const bool dist_losses = ctx.risk.distance_losses;
    for (std::size_t si = 1; si < prim.states.size(); ++si) {
        const Vec2 p = prim.states[si].position();
        static_max = std::max(static_max, ctx.costmap.cost_at(p));
        if (static_max >= 1.0) return false;
        const std::size_t k = static_cast<std::size_t>(base) + si;
        for (std::size_t f = 0; f < ctx.fans.size(); ++f) {
            const auto& samples = ctx.fans[f].samples;
            auto& ls = losses.fan[f];
            for (std::size_t s = 0; s < samples.size(); ++s) {
                if (!dist_losses && ls[s] != 0.0) continue;
                const double d = distance(p, samples[s][k]);
                if (dist_losses)
                    ls[s] = std::max(ls[s], std::max(0.0, ctx.contact_dist - d));
                else if (d - ctx.contact_dist < 0.0)
                    ls[s] = 1.0;
            }
        }
        for (std::size_t s = 0; s < ctx.phantoms.samples.size(); ++s) {
            if (!dist_losses && losses.phantom[s] != 0.0) continue;
            const double d = distance(p, ctx.phantoms.samples[s].positions[k]);
            if (dist_losses)
                losses.phantom[s] = std::max(losses.phantom[s], std::max(0.0, ctx.contact_dist - d));
            else if (d - ctx.contact_dist < 0.0)
                losses.phantom[s] = 1.0;
        }
    }
    return true;
}

void evaluate_leaf(const Pose2& endpoint, const NodeLosses& losses, double static_max,
                   double wsum, SearchContext& ctx) {
    ++ctx.leaves;
    std::vector<double> fan_probs;
    fan_probs.reserve(ctx.fans.size());
    for (const auto& ls : losses.fan) fan_probs.push_back(risk::cvar(ls, ctx.risk.alpha_coll));
    double occlusion = 0.0;
    if (!losses.phantom.empty())
        occlusion = std::max(0.0, risk::cvar(losses.phantom, ctx.risk.alpha_peek) -
                                      ctx.risk.epsilon_peek);
    const risk::CostBreakdown cost = risk::combine_cost(
        risk::goal_error_sq(endpoint.position(), ctx.goal.position(), ctx.risk), static_max,
        fan_probs, occlusion, ctx.risk);

    const bool better =
        !ctx.have_best || cost.total < ctx.best_total ||
        (cost.total == ctx.best_total && wsum < ctx.best_wsum);
    if (better) {
        ctx.have_best = true;
        ctx.best_total = cost.total;
        ctx.best_wsum = wsum;
        ctx.best_sequence = ctx.stack;
    }
}

void dfs(const Pose2& pose, const Twist& twist, int depth, int base, const NodeLosses& losses,
         double static_max, double wsum, SearchContext& ctx) {
    const auto prims = dyn::generate_primitives(pose, twist, ctx.cfg.limits, ctx.cfg.grid,
                                                ctx.cfg.primitive_duration, ctx.cfg.dt_sample);
    for (const auto& prim : prims) {
        NodeLosses child = losses;
        double child_static = static_max;
        if (!absorb_segment(prim, base, ctx, child, child_static)) continue;
        ctx.stack.push_back(prim);
        const double child_wsum = wsum + std::abs(prim.control.omega);
        if (depth + 1 == ctx.cfg.tree_depth) {
            evaluate_leaf(prim.endpoint(), child, child_static, child_wsum, ctx);
        } else {
            dfs(prim.endpoint(), prim.control, depth + 1,
                base + static_cast<int>(prim.states.size()) - 1, child, child_static,
                child_wsum, ctx);
        }
        ctx.stack.pop_back();
    }
}

std::vector<dyn::MotionPrimitive> braking_sequence(const Pose2& pose, const Twist& twist,
                                                   const PlannerConfig& cfg) {
    std::vector<dyn::MotionPrimitive> seq;
    Pose2 p = pose;
    Twist t = twist;
    for (int d = 0; d < cfg.tree_depth; ++d) {
        const Twist brake =
            dyn::braking_control(t, cfg.limits, cfg.grid, cfg.primitive_duration);
        auto prims = dyn::generate_primitives(p, t, cfg.limits, cfg.grid,
                                              cfg.primitive_duration, cfg.dt_sample);
        const dyn::MotionPrimitive* chosen = nullptr;
        for (const auto& prim : prims)
            if (prim.control == brake) { chosen = &prim; break; }
        seq.push_back(chosen != nullptr ? *chosen : prims.front());
        p = seq.back().endpoint();
        t = seq.back().control;
    }
    return seq;
}

void check_prediction_alignment(const std::vector<predict::PredictionFan>& fans,
                                const predict::PhantomEnsemble& phantoms,
                                const PlannerConfig& cfg) {
    const std::size_t want = static_cast<std::size_t>(cfg.horizon_steps()) + 1;
    for (const auto& fan : fans) {
        if (fan.samples.empty()) throw std::invalid_argument("plan: empty prediction fan");
        if (fan.dt_sample != cfg.dt_sample || fan.samples.front().size() != want)
            throw std::invalid_argument("plan: fan horizon mismatch");
    }
    if (!phantoms.empty() &&
        (phantoms.dt_sample != cfg.dt_sample ||
         phantoms.samples.front().positions.size() != want))
        throw std::invalid_argument("plan: phantom horizon mismatch");
}

}  // namespace

Plan plan(const Pose2& pose, const Twist& twist, const Pose2& goal,
          const world::Costmap& costmap, const std::vector<predict::PredictionFan>& fans,
          const predict::PhantomEnsemble& phantoms, const PlannerConfig& cfg) {
    cfg.validate();
    check_prediction_alignment(fans, phantoms, cfg);

    SearchContext ctx{goal, costmap, fans, phantoms, cfg.effective_risk(), cfg,
                      /*contact_dist=*/0.0, {}, {}, 0.0, 0.0, false, 0};
    ctx.contact_dist = ctx.risk.robot_radius + ctx.risk.human_radius;

    // Sample index 0 (the current state) participates in every candidate.
    NodeLosses root;
    root.fan.resize(fans.size());
    for (std::size_t f = 0; f < fans.size(); ++f) root.fan[f].assign(fans[f].size(), 0.0);
    root.phantom.assign(phantoms.size(), 0.0);
    double root_static = costmap.cost_at(pose.position());
    const bool dist_losses = ctx.risk.distance_losses;
    for (std::size_t f = 0; f < fans.size(); ++f) {
        for (std::size_t s = 0; s < fans[f].samples.size(); ++s) {
            const double d = distance(pose.position(), fans[f].samples[s][0]);
            if (dist_losses)
                root.fan[f][s] = std::max(0.0, ctx.contact_dist - d);
            else if (d - ctx.contact_dist < 0.0)
                root.fan[f][s] = 1.0;
        }
    }
    for (std::size_t s = 0; s < phantoms.samples.size(); ++s) {
        const double d = distance(pose.position(), phantoms.samples[s].positions[0]);
        if (dist_losses)
            root.phantom[s] = std::max(0.0, ctx.contact_dist - d);
        else if (d - ctx.contact_dist < 0.0)
            root.phantom[s] = 1.0;
    }

    if (root_static < 1.0) dfs(pose, twist, 0, 0, root, root_static, 0.0, ctx);

    Plan out;
    out.candidate_count = ctx.leaves;
    if (!ctx.have_best) {
        out.sequence = braking_sequence(pose, twist, cfg);
        out.emergency_stop = true;
    } else {
        out.sequence = std::move(ctx.best_sequence);
    }
    out.trajectory = dyn::rollout(pose, out.sequence);
    out.cost = risk::total_cost(out.trajectory, goal, costmap, fans, phantoms,
                                cfg.effective_risk());
    return out;
}

}  // namespace hallway::planner
