#include "firmtrack/resolve/identity.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "firmtrack/ingest/normalize.hpp"
#include "firmtrack/resolve/levenshtein.hpp"

namespace firmtrack::resolve {

namespace {

struct RawPerson {
    PersonKey key;
    std::string forenames;
    std::map<std::string, Appointment> appointments;  // by company, earliest evidence kept
    std::set<std::string> variants;
    std::optional<std::pair<YearMonth, std::string>> postcode;  // earliest record's postcode
    bool missing_birth_month = false;

    void absorb_appointment(Appointment app) {
        auto [it, inserted] = appointments.try_emplace(app.company_id, app);
        if (!inserted && app.evidence_month() < it->second.evidence_month()) it->second = app;
    }

    void absorb_postcode(YearMonth month, const std::optional<std::string>& pc) {
        if (!pc || pc->empty()) return;
        std::pair<YearMonth, std::string> cand{month, *pc};
        if (!postcode || cand < *postcode) postcode = std::move(cand);
    }
};

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::string_view gender_name(Gender g) {
    switch (g) {
        case Gender::Woman: return "Woman";
        case Gender::Man: return "Man";
        case Gender::Unresolved: return "Unresolved";
    }
    return "?";
}

int ResolvedPerson::prior_firm_count(YearMonth as_of) const {
    std::set<std::string> companies;
    for (const auto& app : appointments) {
        if (app.evidence_month() < as_of) companies.insert(app.company_id);
    }
    return static_cast<int>(companies.size());
}

FirstTimeStatus classify_first_time(const ResolvedPerson& person, YearMonth event_month) {
    return person.prior_firm_count(event_month) == 0 ? FirstTimeStatus::FirstTime
                                                     : FirstTimeStatus::AlreadyOfficer;
}

std::vector<ResolvedPerson> resolve_identities(
    const std::vector<ingest::OfficerEventRecord>& records, int fuzzy_threshold) {
    // Exact phase: group by (first forename, surname, birth month). The
    // birth month anchors cross-firm linkage, so records without one only
    // collapse within a single firm (repeat monthly rows of the same
    // appointment) and never aggregate across companies.
    using ExactKey = std::tuple<std::string, std::string, std::optional<YearMonth>, std::string>;
    std::map<ExactKey, RawPerson> exact;
    for (const auto& rec : records) {
        ingest::NormalizedName name = ingest::normalize_name(rec.officer_raw_name);
        if (!name.usable) continue;  // unmatched residue; counted nowhere
        PersonKey key{name.first_forename(), name.surname, rec.birth_month};
        std::string anchor = rec.birth_month ? std::string() : rec.company_id;
        auto [it, inserted] =
            exact.try_emplace(ExactKey{key.first_forename, key.surname, key.birth_month, anchor});
        RawPerson& p = it->second;
        if (inserted) {
            p.key = key;
            p.forenames = name.forenames;
            p.variants.insert(key.first_forename);
            p.missing_birth_month = !rec.birth_month.has_value();
        }
        p.absorb_appointment(Appointment{rec.company_id, rec.appointment_date,
                                         rec.resignation_date, rec.record_month});
        p.absorb_postcode(rec.record_month, rec.correspondence_postcode);
    }

    // Fuzzy phase: blocks share (surname, birth month); members are the
    // exact groups. Links are processed distance level by distance level;
    // at each level a variant linking to two existing clusters marks the
    // result ambiguous.
    std::vector<ResolvedPerson> out;
    long next_id = 1;

    using BlockKey = std::tuple<std::string, std::optional<YearMonth>, std::string>;
    std::map<BlockKey, std::vector<RawPerson*>> blocks;
    for (auto& [key, p] : exact)
        blocks[{std::get<1>(key), std::get<2>(key), std::get<3>(key)}].push_back(&p);

    for (auto& [bkey, members] : blocks) {
        const bool can_fuzzy = std::get<1>(bkey).has_value() && fuzzy_threshold > 0;
        const int n = static_cast<int>(members.size());
        DisjointSet ds(n);
        std::vector<bool> ambiguous(n, false);
        std::vector<int> link_distance(n, 0);

        if (can_fuzzy && n > 1) {
            for (int level = 1; level <= fuzzy_threshold; ++level) {
                // Collect this level's links between current clusters.
                std::vector<std::pair<int, int>> links;
                std::map<int, std::set<int>> partners;  // node -> other clusters at this level
                for (int i = 0; i < n; ++i) {
                    for (int j = i + 1; j < n; ++j) {
                        if (ds.find(i) == ds.find(j)) continue;
                        int dist = levenshtein(members[i]->key.first_forename,
                                               members[j]->key.first_forename);
                        if (dist != level) continue;
                        links.emplace_back(i, j);
                        partners[i].insert(ds.find(j));
                        partners[j].insert(ds.find(i));
                    }
                }
                for (const auto& [node, others] : partners) {
                    if (others.size() > 1) ambiguous[node] = true;  // tie at this level
                }
                for (auto [i, j] : links) {
                    ds.unite(i, j);
                    link_distance[ds.find(i)] = std::max(
                        {link_distance[ds.find(i)], link_distance[i], link_distance[j], level});
                }
            }
        }

        // Emit one person per cluster.
        std::map<int, std::vector<int>> clusters;
        for (int i = 0; i < n; ++i) clusters[ds.find(i)].push_back(i);
        for (auto& [root, idxs] : clusters) {
            ResolvedPerson person;
            person.person_id = next_id++;
            person.missing_birth_month = !std::get<1>(bkey).has_value();
            person.ambiguous = false;
            std::optional<std::pair<YearMonth, std::string>> best_postcode;
            int max_link = 0;
            // Canonical variant: most appointments, ties to the
            // lexicographically smallest forename.
            const RawPerson* canonical = members[idxs.front()];
            for (int i : idxs) {
                const RawPerson* p = members[i];
                person.name_variants.insert(p->key.first_forename);
                for (const auto& [cid, app] : p->appointments) {
                    person.appointments.push_back(app);
                }
                if (ambiguous[i]) person.ambiguous = true;
                if (p->postcode && (!best_postcode || *p->postcode < *best_postcode))
                    best_postcode = p->postcode;
                max_link = std::max(max_link, link_distance[i]);
                if (p->appointments.size() > canonical->appointments.size() ||
                    (p->appointments.size() == canonical->appointments.size() &&
                     p->key.first_forename < canonical->key.first_forename))
                    canonical = p;
            }
            max_link = std::max(max_link, link_distance[root]);
            person.key = canonical->key;
            person.forenames = canonical->forenames;
            if (best_postcode) person.postcode = best_postcode->second;
            person.match_distance = idxs.size() > 1 ? std::max(max_link, 1) : 0;
            // Deduplicate appointments that arrived via different variants.
            std::sort(person.appointments.begin(), person.appointments.end(),
                      [](const Appointment& a, const Appointment& b) {
                          if (a.company_id != b.company_id) return a.company_id < b.company_id;
                          return a.evidence_month() < b.evidence_month();
                      });
            std::vector<Appointment> dedup;
            for (auto& app : person.appointments) {
                if (dedup.empty() || dedup.back().company_id != app.company_id)
                    dedup.push_back(std::move(app));
            }
            person.appointments = std::move(dedup);
            out.push_back(std::move(person));
        }
    }
    return out;
}

}  // namespace firmtrack::resolve
