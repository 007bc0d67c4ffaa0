#include "generator.h"

#include "grounder.h"
#include "model.h"
#include "parser.h"
#include "validate.h"

#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

using namespace std;

namespace nplan {

namespace {

int pick(mt19937 &rng, int n) { return static_cast<int>(rng() % n); }

const char *const zeno_domain = R"((define (domain zeno-lite)
  (:requirements :strips :typing :numeric-fluents)
  (:types plane person city)
  (:predicates (at-plane ?a - plane ?c - city)
               (at-person ?p - person ?c - city)
               (in ?p - person ?a - plane))
  (:functions (fuel ?a - plane)
              (fuel-max ?a - plane)
              (onboard ?a - plane)
              (capacity ?a - plane)
              (distance ?c1 - city ?c2 - city)
              (total-fuel-used))
  (:action board
    :parameters (?p - person ?a - plane ?c - city)
    :precondition (and (at-person ?p ?c) (at-plane ?a ?c)
                       (< (onboard ?a) (capacity ?a)))
    :effect (and (not (at-person ?p ?c)) (in ?p ?a)
                 (increase (onboard ?a) 1)))
  (:action debark
    :parameters (?p - person ?a - plane ?c - city)
    :precondition (and (in ?p ?a) (at-plane ?a ?c))
    :effect (and (not (in ?p ?a)) (at-person ?p ?c)
                 (decrease (onboard ?a) 1)))
  (:action fly
    :parameters (?a - plane ?c1 - city ?c2 - city)
    :precondition (and (at-plane ?a ?c1)
                       (>= (fuel ?a) (distance ?c1 ?c2)))
    :effect (and (not (at-plane ?a ?c1)) (at-plane ?a ?c2)
                 (decrease (fuel ?a) (distance ?c1 ?c2))
                 (increase (total-fuel-used) (distance ?c1 ?c2))))
  (:action refuel
    :parameters (?a - plane ?c - city)
    :precondition (and (at-plane ?a ?c))
    :effect (and (assign (fuel ?a) (fuel-max ?a)))))
)";

GeneratedInstance gen_zeno(int size, unsigned seed) {
    mt19937 rng(seed);
    int persons = size;
    int cities = 2 + (size + 1) / 2;
    int planes = 1 + (size - 1) / 4;

    vector<vector<int>> dist(cities, vector<int>(cities, 0));
    int max_dist = 1;
    for (int i = 0; i < cities; ++i)
        for (int j = 0; j < cities; ++j)
            if (i != j) {
                dist[i][j] = 1 + pick(rng, 9);
                max_dist = max(max_dist, dist[i][j]);
            }
    int fuel_max = max_dist + pick(rng, max_dist + 1);
    vector<int> plane_at(planes), plane_fuel(planes), plane_cap(planes);
    for (int a = 0; a < planes; ++a) {
        plane_at[a] = pick(rng, cities);
        plane_fuel[a] = pick(rng, fuel_max + 1);
        plane_cap[a] = 1 + pick(rng, 3);
    }
    vector<int> person_at(persons), person_to(persons);
    for (int p = 0; p < persons; ++p) {
        person_at[p] = pick(rng, cities);
        person_to[p] = (person_at[p] + 1 + pick(rng, cities - 1)) % cities;
    }

    ostringstream prob;
    prob << "(define (problem zeno-lite-" << size << "-" << seed << ")\n";
    prob << "  (:domain zeno-lite)\n  (:objects";
    for (int a = 0; a < planes; ++a)
        prob << " a" << a;
    prob << " - plane";
    for (int p = 0; p < persons; ++p)
        prob << " p" << p;
    prob << " - person";
    for (int c = 0; c < cities; ++c)
        prob << " c" << c;
    prob << " - city)\n  (:init\n";
    for (int a = 0; a < planes; ++a) {
        prob << "    (at-plane a" << a << " c" << plane_at[a] << ")"
             << " (= (fuel a" << a << ") " << plane_fuel[a] << ")"
             << " (= (fuel-max a" << a << ") " << fuel_max << ")"
             << " (= (onboard a" << a << ") 0)"
             << " (= (capacity a" << a << ") " << plane_cap[a] << ")\n";
    }
    for (int p = 0; p < persons; ++p)
        prob << "    (at-person p" << p << " c" << person_at[p] << ")\n";
    for (int i = 0; i < cities; ++i) {
        prob << "   ";
        for (int j = 0; j < cities; ++j)
            prob << " (= (distance c" << i << " c" << j << ") " << dist[i][j]
                 << ")";
        prob << "\n";
    }
    prob << "    (= (total-fuel-used) 0))\n  (:goal (and";
    for (int p = 0; p < persons; ++p)
        prob << " (at-person p" << p << " c" << person_to[p] << ")";
    prob << "))\n  (:metric minimize (total-fuel-used)))\n";

    // One plane ferries everyone, refueling before every flight.
    GeneratedInstance out;
    out.domain = zeno_domain;
    out.problem = prob.str();
    int cur = plane_at[0];
    auto fly_to = [&](int dest) {
        if (cur == dest)
            return;
        out.witness.push_back("(refuel a0 c" + to_string(cur) + ")");
        out.witness.push_back("(fly a0 c" + to_string(cur) + " c" +
                              to_string(dest) + ")");
        cur = dest;
    };
    for (int p = 0; p < persons; ++p) {
        if (person_at[p] == person_to[p])
            continue;
        fly_to(person_at[p]);
        out.witness.push_back("(board p" + to_string(p) + " a0 c" +
                              to_string(cur) + ")");
        fly_to(person_to[p]);
        out.witness.push_back("(debark p" + to_string(p) + " a0 c" +
                              to_string(cur) + ")");
    }
    return out;
}

const char *const depot_domain = R"((define (domain depot-lite)
  (:requirements :strips :typing :numeric-fluents)
  (:types truck place crate)
  (:predicates (truck-at ?t - truck ?p - place)
               (crate-at ?c - crate ?p - place)
               (on-truck ?c - crate ?t - truck))
  (:functions (load ?t - truck)
              (capacity ?t - truck)
              (weight ?c - crate)
              (energy)
              (energy-max)
              (total-cost))
  (:action drive
    :parameters (?t - truck ?from - place ?to - place)
    :precondition (and (truck-at ?t ?from))
    :effect (and (not (truck-at ?t ?from)) (truck-at ?t ?to)
                 (increase (total-cost) 1)))
  (:action load
    :parameters (?c - crate ?t - truck ?p - place)
    :precondition (and (crate-at ?c ?p) (truck-at ?t ?p)
                       (>= (- (capacity ?t) (+ (load ?t) (weight ?c))) 0)
                       (>= (energy) 1))
    :effect (and (not (crate-at ?c ?p)) (on-truck ?c ?t)
                 (increase (load ?t) (weight ?c))
                 (decrease (energy) 1)))
  (:action unload
    :parameters (?c - crate ?t - truck ?p - place)
    :precondition (and (on-truck ?c ?t) (truck-at ?t ?p))
    :effect (and (not (on-truck ?c ?t)) (crate-at ?c ?p)
                 (decrease (load ?t) (weight ?c))))
  (:action recharge
    :parameters (?t - truck ?p - place)
    :precondition (and (truck-at ?t ?p))
    :effect (and (assign (energy) (energy-max)))))
)";

GeneratedInstance gen_depot(int size, unsigned seed) {
    mt19937 rng(seed);
    int crates = size;
    int places = 2 + (size + 1) / 2;
    int trucks = 1 + (size - 1) / 5;

    vector<int> weight(crates), crate_at(crates), crate_to(crates);
    int max_weight = 1;
    for (int c = 0; c < crates; ++c) {
        weight[c] = 1 + pick(rng, 5);
        max_weight = max(max_weight, weight[c]);
        crate_at[c] = pick(rng, places);
        crate_to[c] = (crate_at[c] + 1 + pick(rng, places - 1)) % places;
    }
    vector<int> truck_at(trucks), truck_cap(trucks);
    for (int t = 0; t < trucks; ++t) {
        truck_at[t] = pick(rng, places);
        // Every crate must fit alone on every truck.
        truck_cap[t] = max_weight + pick(rng, 4);
    }

    ostringstream prob;
    prob << "(define (problem depot-lite-" << size << "-" << seed << ")\n";
    prob << "  (:domain depot-lite)\n  (:objects";
    for (int t = 0; t < trucks; ++t)
        prob << " t" << t;
    prob << " - truck";
    for (int p = 0; p < places; ++p)
        prob << " l" << p;
    prob << " - place";
    for (int c = 0; c < crates; ++c)
        prob << " b" << c;
    prob << " - crate)\n  (:init\n";
    for (int t = 0; t < trucks; ++t)
        prob << "    (truck-at t" << t << " l" << truck_at[t] << ")"
             << " (= (load t" << t << ") 0)"
             << " (= (capacity t" << t << ") " << truck_cap[t] << ")\n";
    for (int c = 0; c < crates; ++c)
        prob << "    (crate-at b" << c << " l" << crate_at[c] << ")"
             << " (= (weight b" << c << ") " << weight[c] << ")\n";
    prob << "    (= (energy) " << crates << ") (= (energy-max) " << crates
         << ") (= (total-cost) 0))\n  (:goal (and";
    for (int c = 0; c < crates; ++c)
        prob << " (crate-at b" << c << " l" << crate_to[c] << ")";
    prob << "))\n  (:metric minimize (total-cost)))\n";

    GeneratedInstance out;
    out.domain = depot_domain;
    out.problem = prob.str();
    int cur = truck_at[0];
    auto drive_to = [&](int dest) {
        if (cur == dest)
            return;
        out.witness.push_back("(drive t0 l" + to_string(cur) + " l" +
                              to_string(dest) + ")");
        cur = dest;
    };
    for (int c = 0; c < crates; ++c) {
        if (crate_at[c] == crate_to[c])
            continue;
        drive_to(crate_at[c]);
        out.witness.push_back("(load b" + to_string(c) + " t0 l" +
                              to_string(cur) + ")");
        drive_to(crate_to[c]);
        out.witness.push_back("(unload b" + to_string(c) + " t0 l" +
                              to_string(cur) + ")");
    }
    return out;
}

void self_validate(const GeneratedInstance &inst) {
    ParsedTask parsed = parse_task(inst.domain, inst.problem);
    NumericTask task = ground_task(parsed);
    unordered_map<string, int> by_name;
    for (const Action &a : task.actions)
        by_name[a.name] = a.id;
    Plan plan;
    for (const string &name : inst.witness) {
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw logic_error("generated witness uses unknown action " + name);
        plan.push_back(it->second);
    }
    Verdict verdict = validate_plan(task, plan);
    if (!verdict.valid)
        throw logic_error("generated witness is invalid: " + verdict.reason);
}

}  // namespace

GeneratedInstance gen_instance(const string &family, int size, unsigned seed) {
    if (size < 1)
        throw invalid_argument("instance size must be at least 1");
    GeneratedInstance inst;
    if (family == "zeno")
        inst = gen_zeno(size, seed);
    else if (family == "depot")
        inst = gen_depot(size, seed);
    else
        throw invalid_argument("unknown family: " + family +
                               " (expected zeno or depot)");
    self_validate(inst);
    return inst;
}

}  // namespace nplan
