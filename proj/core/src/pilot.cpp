#include "encounter/pilot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nfg/stats.hpp"

namespace encounter {

using nfg::Cpd;
using nfg::Instantiation;
using nfg::NodeId;
using nfg::RngStream;
using nfg::Value;

Vec gaussian_vec_sample(const Vec& mu, const Vec& sigma, RngStream& rng) {
  if (mu.size() != sigma.size()) throw nfg::NetError("gaussian_vec_sample: size mismatch");
  Vec out(mu.size());
  for (size_t d = 0; d < mu.size(); ++d)
    out[d] = sigma[d] > 0 ? rng.gaussian(mu[d], sigma[d]) : mu[d];
  return out;
}

double gaussian_vec_density(const Vec& x, const Vec& mu, const Vec& sigma) {
  if (x.size() != mu.size() || mu.size() != sigma.size())
    throw nfg::NetError("gaussian_vec_density: size mismatch");
  double p = 1;
  for (size_t d = 0; d < x.size(); ++d) {
    if (sigma[d] > 0)
      p *= nfg::gaussian_pdf(x[d], mu[d], sigma[d]);
    else if (x[d] != mu[d])
      return 0;
  }
  return p;
}

int intent_outcome(const TcasIntent& t) {
  return t.issued ? 1 + static_cast<int>(t.sense) : 0;
}

TcasIntent intent_from_outcome(int outcome) {
  if (outcome < 0 || outcome >= kIntentOutcomes)
    throw nfg::NetError("advisory intent outcome out of range");
  if (outcome == 0) return TcasIntent{};
  return TcasIntent{true, static_cast<Sense>(outcome - 1)};
}

double pilot_utility(const UtilityWeights& w, double min_separation, double own_vertical_rate,
                     double commanded_vertical_rate, int advisory) {
  double u = w.alpha1 * std::log(w.delta + min_separation) -
             w.alpha2 * std::fabs(own_vertical_rate - commanded_vertical_rate);
  if (advisory != kRaNone)
    u -= w.alpha3 * std::fabs(ra_rate(advisory) - commanded_vertical_rate);
  return u;
}

double pilot_utility_horizontal(const UtilityWeights& w, double kappa, double min_separation,
                                double own_vertical_rate, double commanded_vertical_rate,
                                int advisory, double own_heading_rate,
                                double commanded_heading_rate, double heading_advisory) {
  return pilot_utility(w, min_separation, own_vertical_rate, commanded_vertical_rate, advisory) -
         w.alpha2 * kappa * std::fabs(own_heading_rate - commanded_heading_rate) -
         w.alpha3 * kappa * std::fabs(heading_advisory - commanded_heading_rate);
}

namespace {

std::string node_name(const char* base, int i) { return base + std::to_string(i); }

// The 14 kinematic entries a pilot can observe, pulled from a packed state.
Vec kinematic_centers(const Vec& packed) {
  Vec mu(kPilotObsDims);
  for (int a = 0; a < 2; ++a)
    for (int d = 0; d < 7; ++d) mu[7 * a + d] = packed[kAircraftDims * a + d];
  return mu;
}

Vec tiled_pilot_sigma(double scale) {
  Vec sig(kPilotObsDims);
  for (int a = 0; a < 2; ++a)
    for (int d = 0; d < 7; ++d) sig[7 * a + d] = kPilotNoiseSigma[d] * scale;
  return sig;
}

Vec scaled(const std::array<double, kTcasObsDims>& base, double scale) {
  Vec sig(base.begin(), base.end());
  for (double& s : sig) s *= scale;
  return sig;
}

int packed_intent_outcome(const Vec& packed, int aircraft) {
  const int base = 2 * kAircraftDims + 2 * aircraft;
  const bool issued = packed[base] != 0;
  const int sense = static_cast<int>(std::lround(packed[base + 1]));
  return issued ? 1 + sense : 0;
}

void write_packed_intent(Vec& packed, int aircraft, const TcasIntent& t) {
  const int base = 2 * kAircraftDims + 2 * aircraft;
  packed[base] = t.issued ? 1 : 0;
  packed[base + 1] = static_cast<double>(static_cast<int>(t.sense));
}

double trunc_gauss(RngStream& rng, double mu, double sigma, double lo, double hi) {
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.gaussian(mu, sigma);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mu, lo, hi);
}

nfg::NodeProposal gaussian_proposal(Vec center, Vec sigma) {
  nfg::NodeProposal p;
  p.sample = [center, sigma](RngStream& rng) {
    return Value(gaussian_vec_sample(center, sigma, rng));
  };
  p.density = [center, sigma](const Value& v) {
    return gaussian_vec_density(nfg::as_vec(v), center, sigma);
  };
  return p;
}

// Proposal for the full state, centered on `center` (a packed state). The 14
// observable kinematic dimensions get kStateProposalSigma spreads, commands
// and the decider's own intent are copied, and the other side's intent stays
// on its center value with probability `stay` (else uniform over the four
// outcomes). stay = 0 reproduces the uniform intent prior exactly.
nfg::NodeProposal state_proposal(Vec center, int decider, double stay) {
  const int other = 1 - decider;
  const int true_outcome = packed_intent_outcome(center, other);

  nfg::NodeProposal p;
  p.sample = [center, other, true_outcome, stay](RngStream& rng) {
    Vec out = center;
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 7; ++d) {
        const double s = kStateProposalSigma[d];
        if (s > 0) out[kAircraftDims * a + d] = rng.gaussian(center[kAircraftDims * a + d], s);
      }
    const int oc =
        rng.bernoulli(stay) ? true_outcome : rng.uniform_int(kIntentOutcomes);
    write_packed_intent(out, other, intent_from_outcome(oc));
    return Value(out);
  };
  p.density = [center, decider, other, true_outcome, stay](const Value& v) {
    const Vec& x = nfg::as_vec(v);
    double p = 1;
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < kAircraftDims; ++d) {
        const int idx = kAircraftDims * a + d;
        const double s = d < 7 ? kStateProposalSigma[d] : 0.0;
        if (s > 0)
          p *= nfg::gaussian_pdf(x[idx], center[idx], s);
        else if (x[idx] != center[idx])
          return 0.0;
      }
    const int own_base = 2 * kAircraftDims + 2 * decider;
    if (x[own_base] != center[own_base] || x[own_base + 1] != center[own_base + 1]) return 0.0;
    const int oc = packed_intent_outcome(x, other);
    p *= (oc == true_outcome ? stay : 0.0) + (1.0 - stay) / kIntentOutcomes;
    return p;
  };
  return p;
}

}  // namespace

Vec pilot_observe(const WorldState& s, double noise_scale, RngStream& rng) {
  return gaussian_vec_sample(kinematic_centers(pack_world(s)), tiled_pilot_sigma(noise_scale),
                             rng);
}

DecisionProblem build_decision_problem(const WorldState& s, const DecisionInputs& in,
                                       const EncounterConfig& cfg) {
  if (in.pilot != 0 && in.pilot != 1) throw nfg::NetError("pilot index must be 0 or 1");
  if (static_cast<int>(in.observation.size()) != kPilotObsDims)
    throw nfg::NetError("pilot observation has wrong dimension");
  if (static_cast<int>(in.tcas_frame.size()) != kTcasObsDims)
    throw nfg::NetError("sensor frame has wrong dimension");
  if (in.advisory < 0 || in.advisory >= kRaCount)
    throw nfg::NetError("advisory index out of range");

  const int me = in.pilot;
  const bool horizontal = cfg.sim.horizontal_mode;
  const double hard = cfg.horizontal.hard_rate_deg * std::numbers::pi / 180.0;
  const double kappa = turn_cost_scale(hard);
  const double decision_time = s.time;

  const Vec obs_sigma = tiled_pilot_sigma(cfg.noise.pilot);
  const Vec frame_sigma = scaled(kTcasNoiseSigma, cfg.noise.tcas);
  const TcasParams params = cfg.tcas;
  const double tcas_scale = cfg.noise.tcas;

  // Spaces. State, view, and frame boxes are wide open; only the action box
  // carries meaningful bounds.
  const auto wide = [](int dims) {
    return nfg::VariableSpace::box(Vec(dims, -1e9), Vec(dims, 1e9));
  };
  Vec act_lo{-kVerticalRateLimit}, act_hi{kVerticalRateLimit};
  if (horizontal) {
    act_lo.push_back(-hard);
    act_hi.push_back(hard);
  }
  const nfg::VariableSpace action_space = nfg::VariableSpace::box(act_lo, act_hi);

  nfg::GameNetBuilder b;

  // S: improper prior, flat over kinematics and uniform (1/4 per aircraft)
  // over the four advisory-intent outcomes. Only proposals can sample it; the
  // constant density cancels out of normalized estimates and the argmax.
  Cpd state_cpd;
  state_cpd.sample = [](const Instantiation&, RngStream&) -> Value {
    throw nfg::NetError("state node S has a flat improper prior; sampling it needs a proposal");
  };
  state_cpd.density = [](const Value&, const Instantiation&) { return 1.0 / 16.0; };
  b.chance("S", {}, wide(kWorldDims), state_cpd);

  for (int i = 0; i < 2; ++i) {
    Cpd view;
    view.sample = [obs_sigma](const Instantiation& pa, RngStream& rng) {
      return Value(gaussian_vec_sample(kinematic_centers(nfg::as_vec(pa.at("S"))), obs_sigma,
                                       rng));
    };
    view.density = [obs_sigma](const Value& v, const Instantiation& pa) {
      return gaussian_vec_density(nfg::as_vec(v), kinematic_centers(nfg::as_vec(pa.at("S"))),
                                  obs_sigma);
    };
    b.chance(node_name("W", i), {"S"}, wide(kPilotObsDims), view);

    Cpd frame;
    frame.sample = [i, tcas_scale](const Instantiation& pa, RngStream& rng) {
      const WorldState w = unpack_world(nfg::as_vec(pa.at("S")));
      return Value(pack_tcas_observation(tcas_observe(w, i, tcas_scale, rng)));
    };
    // The tiny probability mass moved by the range >= 0 clamp is ignored
    // here; encounter ranges sit far from zero.
    frame.density = [i, frame_sigma](const Value& v, const Instantiation& pa) {
      const WorldState w = unpack_world(nfg::as_vec(pa.at("S")));
      return gaussian_vec_density(nfg::as_vec(v), pack_tcas_observation(tcas_geometry(w, i)),
                                  frame_sigma);
    };
    b.chance(node_name("WTCAS", i), {"S"}, wide(kTcasObsDims), frame);

    const std::string frame_id = node_name("WTCAS", i);
    b.chance(node_name("T", i), {"S", frame_id}, nfg::VariableSpace::discrete(kRaCount),
             nfg::deterministic_cpd([i, frame_id, params](const Instantiation& pa) {
               const WorldState w = unpack_world(nfg::as_vec(pa.at("S")));
               const TcasObservation o =
                   unpack_tcas_observation(nfg::as_vec(pa.at(frame_id)));
               return Value(mini_tcas(o, w.intents[i], w.intents[1 - i], params));
             }));

    b.decision(node_name("A", i), i, {node_name("W", i), node_name("T", i)}, action_space);
  }

  // H: deterministic completion of the encounter once both maneuvers are
  // fixed, after the shared reaction delay.
  {
    const double delay = cfg.sim.reaction_delay;
    const double dt = cfg.sim.dt;
    const double duration = cfg.sim.max_duration;
    const FilterTaus taus = cfg.filter;
    b.chance("H", {"S", "A0", "A1"}, nfg::VariableSpace::interval(0, 1e7),
             nfg::deterministic_cpd(
                 [decision_time, delay, dt, duration, taus](const Instantiation& pa) {
                   const WorldState w = unpack_world(nfg::as_vec(pa.at("S")), decision_time);
                   std::array<ManeuverPlan, 2> plans;
                   for (int a = 0; a < 2; ++a) {
                     const Vec& act = nfg::as_vec(pa.at(node_name("A", a)));
                     plans[a].active = true;
                     plans[a].start_time = decision_time + delay;
                     plans[a].vertical_rate = act[0];
                     if (act.size() > 1) {
                       plans[a].has_heading_rate = true;
                       plans[a].heading_rate = act[1];
                     }
                   }
                   return Value(nfg::Vec{
                       rollout_min_separation(w, plans, dt, duration, taus)});
                 }));
  }

  for (int i = 0; i < 2; ++i) {
    const std::string ai = node_name("A", i);
    const std::string ti = node_name("T", i);
    const double h_adv = in.heading_advisory[i];
    const UtilityWeights w = cfg.utility;
    const int vz_idx = kAircraftDims * i + 5;
    const int hr_idx = kAircraftDims * i + 4;
    b.utility(i, [ai, ti, h_adv, w, vz_idx, hr_idx, horizontal, kappa](const Instantiation& x) {
      const double sep = nfg::as_scalar(x.at("H"));
      const Vec& state = nfg::as_vec(x.at("S"));
      const Vec& act = nfg::as_vec(x.at(ai));
      const int adv = nfg::as_index(x.at(ti));
      if (!horizontal) return pilot_utility(w, sep, state[vz_idx], act[0], adv);
      return pilot_utility_horizontal(w, kappa, sep, state[vz_idx], act[0], adv, state[hr_idx],
                                      act[1], h_adv);
    });
  }

  DecisionProblem p{b.build(), {}, {}, {}, node_name("A", me)};

  // One policy per pilot; only the advisory center of the level-0 response
  // and the keys read from the parent set differ between the two.
  Cpd satisficing;
  satisficing.sample = [act_lo, act_hi](const Instantiation&, RngStream& rng) {
    Vec out(act_lo.size());
    for (size_t d = 0; d < out.size(); ++d) out[d] = rng.uniform(act_lo[d], act_hi[d]);
    return Value(out);
  };

  for (int i = 0; i < 2; ++i) {
    nfg::PlayerPolicy pol;
    pol.level = cfg.pilot.level;
    pol.num_candidates = cfg.pilot.num_candidates;
    pol.num_env_samples = cfg.pilot.num_env_samples;
    pol.satisficing = satisficing;

    const std::string wi = node_name("W", i);
    const std::string ti = node_name("T", i);
    const double sigma0 = cfg.pilot.level0_sigma;
    const double h_adv = in.heading_advisory[i];
    pol.level0.sample = [ti, sigma0, h_adv, horizontal, hard, kappa](const Instantiation& pa,
                                                                     RngStream& rng) {
      const int adv = nfg::as_index(pa.at(ti));
      Vec out{trunc_gauss(rng, ra_rate(adv), sigma0, -kVerticalRateLimit, kVerticalRateLimit)};
      if (horizontal) out.push_back(trunc_gauss(rng, h_adv, sigma0 / kappa, -hard, hard));
      return Value(out);
    };
    pol.active = [ti](const Instantiation& pa) { return nfg::as_index(pa.at(ti)) != kRaNone; };
    pol.passive = nfg::deterministic_cpd([wi, i, horizontal, hard](const Instantiation& pa) {
      const Vec& view = nfg::as_vec(pa.at(wi));
      Vec out{std::clamp(view[7 * i + 5], -kVerticalRateLimit, kVerticalRateLimit)};
      if (horizontal) out.push_back(std::clamp(view[7 * i + 4], -hard, hard));
      return Value(out);
    });
    p.strategy.players[node_name("A", i)] = pol;
  }
  p.strategy.redraw_zero_weights = true;
  p.strategy.redraw_cap_factor = cfg.pilot.redraw_cap_factor;

  // Proposals for modeled deciders: rebuild a state center from what that
  // pilot saw (their view and advisory), with steady-state commands, their
  // own intent implied by the advisory, and the other intent left on the
  // prior (stay = 0). Their sensor frame, when present in the enclosing
  // sample, centers a frame proposal so that redrawn frames keep reproducing
  // the advisory being conditioned on.
  p.strategy.proposal_factory = [](const nfg::GameNet&, const NodeId& node,
                                   const Instantiation& context) {
    const int j = node == "A0" ? 0 : 1;
    const Vec& view = nfg::as_vec(context.at(node_name("W", j)));
    const int adv = nfg::as_index(context.at(node_name("T", j)));
    Vec center(kWorldDims, 0.0);
    for (int a = 0; a < 2; ++a) {
      for (int d = 0; d < 7; ++d) center[kAircraftDims * a + d] = view[7 * a + d];
      const double rate = view[7 * a + 4];
      const double vz = view[7 * a + 5];
      const double speed = view[7 * a + 6];
      center[kAircraftDims * a + 7] = roll_for_heading_rate(rate, speed);
      center[kAircraftDims * a + 8] = vz;
      center[kAircraftDims * a + 9] = speed;
    }
    TcasIntent own;
    if (adv != kRaNone) own = TcasIntent{true, ra_sense(adv)};
    write_packed_intent(center, j, own);
    write_packed_intent(center, 1 - j, TcasIntent{});

    nfg::ProposalOverride ov;
    ov.nodes["S"] = state_proposal(center, j, 0.0);
    const auto frame = context.find(node_name("WTCAS", j));
    if (frame != context.end())
      ov.nodes[node_name("WTCAS", j)] = gaussian_proposal(
          nfg::as_vec(frame->second), Vec(kTcasProposalSigma.begin(), kTcasProposalSigma.end()));
    return ov;
  };

  // Top-level proposals: the simulator's actual state and the actual sensor
  // frame behind the advisory.
  p.proposal.nodes["S"] = state_proposal(pack_world(s), me, cfg.pilot.intent_stay_prob);
  p.proposal.nodes[node_name("WTCAS", me)] = gaussian_proposal(
      in.tcas_frame, Vec(kTcasProposalSigma.begin(), kTcasProposalSigma.end()));

  p.observed[node_name("W", me)] = Value(in.observation);
  p.observed[node_name("T", me)] = Value(in.advisory);
  return p;
}

PilotAction pilot_decide(const WorldState& s, const DecisionInputs& in,
                         const EncounterConfig& cfg, RngStream& rng,
                         nfg::StrategyStats* stats) {
  DecisionProblem p = build_decision_problem(s, in, cfg);
  Value move;
  try {
    move = nfg::level_k_lw_d_relaxed_sample(p.net, p.decision, p.observed, p.strategy, rng,
                                            &p.proposal, stats);
  } catch (const nfg::SamplingError& e) {
    const double rate = e.attempts > 0 ? static_cast<double>(e.achieved) / e.attempts : 0.0;
    throw nfg::SamplingError("pilot " + std::to_string(in.pilot) + " responding to advisory " +
                                 ra_name(in.advisory) + " (acceptance rate " +
                                 std::to_string(rate) + "): " + e.what(),
                             e.attempts, e.achieved);
  }
  const Vec& a = nfg::as_vec(move);
  PilotAction act;
  act.vertical_rate = a[0];
  if (a.size() > 1) {
    act.has_heading_rate = true;
    act.heading_rate = a[1];
  }
  return act;
}

}  // namespace encounter
