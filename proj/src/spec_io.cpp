#include "tedm/economy_spec.hpp"

#include "tedm/error.hpp"

#include <set>

namespace tedm::spec {

using nlohmann::json;
using governance::GovernanceArea;

const EnumNames<StakeholderCategory, 5, 3> kCategoryNames{
    {{{StakeholderCategory::users, "users"},
      {StakeholderCategory::partners, "partners"},
      {StakeholderCategory::developers, "developers"},
      {StakeholderCategory::community, "community"},
      {StakeholderCategory::investors, "investors"}}},
    {{{StakeholderCategory::users, "user"},
      {StakeholderCategory::community, "community_members"},
      {StakeholderCategory::investors, "investor"}}}};

const EnumNames<IncentiveType, 9, 2> kIncentiveTypeNames{
    {{{IncentiveType::token_rewards, "token_rewards"},
      {IncentiveType::staking, "staking"},
      {IncentiveType::liquidity_mining, "liquidity_mining"},
      {IncentiveType::growth_expectations, "growth_expectations"},
      {IncentiveType::access, "access"},
      {IncentiveType::reputation, "reputation"},
      {IncentiveType::governance_participation, "governance_participation"},
      {IncentiveType::network_effects, "network_effects"},
      {IncentiveType::gamification, "gamification"}}},
    {{{IncentiveType::access, "access_to_services"}, {IncentiveType::reputation, "reputation_mechanisms"}}}};

const EnumNames<IncentiveClass, 2, 1> kIncentiveClassNames{
    {{{IncentiveClass::monetary, "monetary"}, {IncentiveClass::non_monetary, "non_monetary"}}},
    {{{IncentiveClass::non_monetary, "nonmonetary"}}}};

const EnumNames<DecentralizationTarget, 3> kTargetNames{
    {{{DecentralizationTarget::private_centralized, "private_centralized"},
      {DecentralizationTarget::public_centralized, "public_centralized"},
      {DecentralizationTarget::public_decentralized, "public_decentralized"}}}};

const EnumNames<Venue, 3, 2> kVenueNames{
    {{{Venue::onchain, "onchain"}, {Venue::offchain, "offchain"}, {Venue::hybrid, "hybrid"}}},
    {{{Venue::onchain, "on_chain"}, {Venue::offchain, "off_chain"}}}};

const EnumNames<SupportMechanism, 8, 2> kSupportNames{
    {{{SupportMechanism::agenda_setting, "agenda_setting"},
      {SupportMechanism::proposal_prescreening, "proposal_prescreening"},
      {SupportMechanism::prediction_markets, "prediction_markets"},
      {SupportMechanism::algorithmic_filtering, "algorithmic_filtering"},
      {SupportMechanism::delegated_voting, "delegated_voting"},
      {SupportMechanism::information_design, "information_design"},
      {SupportMechanism::structured_deliberation, "structured_deliberation"},
      {SupportMechanism::proof_of_personhood, "proof_of_personhood"}}},
    {{{SupportMechanism::proof_of_personhood, "pop"}, {SupportMechanism::delegated_voting, "delegation"}}}};

const EnumNames<Timing, 3> kTimingNames{
    {{{Timing::pre_launch, "pre_launch"}, {Timing::post_launch, "post_launch"}, {Timing::hybrid, "hybrid"}}}};

const EnumNames<Channel, 5> kChannelNames{{{{Channel::private_sale, "private_sale"},
                                            {Channel::public_sale, "public_sale"},
                                            {Channel::airdrop, "airdrop"},
                                            {Channel::liquidity_mining, "liquidity_mining"},
                                            {Channel::reserve, "reserve"}}}};

const EnumNames<ValueCapture, 4> kValueCaptureNames{{{{ValueCapture::governance_rights, "governance_rights"},
                                                      {ValueCapture::asset_claims, "asset_claims"},
                                                      {ValueCapture::network_value, "network_value"},
                                                      {ValueCapture::earnings_claims, "earnings_claims"}}}};

const EnumNames<PriceLever, 4, 2> kPriceLeverNames{
    {{{PriceLever::burn, "burn"}, {PriceLever::staking, "staking"}, {PriceLever::buyback, "buyback"},
      {PriceLever::vesting, "vesting"}}},
    {{{PriceLever::staking, "locking"}, {PriceLever::burn, "token_burn"}}}};

const EnumNames<Severity, 3> kSeverityNames{
    {{{Severity::error, "error"}, {Severity::warning, "warning"}, {Severity::info, "info"}}}};

IncentiveClass taxonomy_class(IncentiveType type) {
    switch (type) {
        case IncentiveType::token_rewards:
        case IncentiveType::staking:
        case IncentiveType::liquidity_mining:
        case IncentiveType::growth_expectations:
            return IncentiveClass::monetary;
        default:
            return IncentiveClass::non_monetary;
    }
}

std::string exact_string(const Quantity& q) {
    Integer den = boost::multiprecision::denominator(q);
    while (den % 2 == 0) den /= 2;
    while (den % 5 == 0) den /= 5;
    if (den == 1) return to_decimal_string(q, 1 << 20);
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

// ---------------------------------------------------------------------------
// Reading

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::SchemaError, message, path.empty() ? "/" : path);
}

std::string type_name(const json& j) { return j.type_name(); }

/// Tracks consumed keys of one JSON object so leftovers become F1 warnings.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, std::vector<Finding>& notes)
        : obj_(obj), path_(std::move(path)), notes_(notes) {
        if (!obj_.is_object()) schema_error(path_, "expected object, found " + type_name(obj_));
    }

    ~ObjectReader() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!used_.count(it.key()))
                notes_.push_back({Severity::warning, "F1", "unknown field '" + it.key() + "' ignored",
                                  child_path(it.key())});
    }

    std::string child_path(const std::string& key) const { return path_ + "/" + key; }
    const std::string& path() const { return path_; }

    const json* optional(const std::string& key) {
        used_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    const json& required(const std::string& key) {
        const json* j = optional(key);
        if (!j) schema_error(child_path(key), "missing required field '" + key + "'");
        return *j;
    }

    void mark_ignored(const std::string& key, const std::string& why) {
        used_.insert(key);
        if (obj_.contains(key))
            notes_.push_back({Severity::warning, "F1", "field '" + key + "' ignored: " + why, child_path(key)});
    }

    std::string string(const std::string& key, bool is_required = false) {
        const json* j = is_required ? &required(key) : optional(key);
        if (!j) return {};
        if (!j->is_string()) schema_error(child_path(key), "expected string, found " + type_name(*j));
        return j->get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* j = optional(key);
        if (!j) return fallback;
        if (!j->is_boolean()) schema_error(child_path(key), "expected boolean, found " + type_name(*j));
        return j->get<bool>();
    }

    std::optional<Quantity> quantity(const std::string& key, bool is_required = false);
    std::optional<std::int64_t> integer(const std::string& key, bool is_required = false);

    template <typename E, std::size_t N, std::size_t A>
    E enumeration(const std::string& key, const EnumNames<E, N, A>& names, std::string_view what) {
        const json& j = required(key);
        if (!j.is_string()) schema_error(child_path(key), "expected string, found " + type_name(j));
        return names.parse(j.get<std::string>(), what, child_path(key));
    }

    template <typename E, std::size_t N, std::size_t A>
    std::vector<E> enum_list(const std::string& key, const EnumNames<E, N, A>& names, std::string_view what);

    std::vector<std::string> string_list(const std::string& key);

    const json& array(const std::string& key, bool is_required = false) {
        static const json empty = json::array();
        const json* j = is_required ? &required(key) : optional(key);
        if (!j) return empty;
        if (!j->is_array()) schema_error(child_path(key), "expected array, found " + type_name(*j));
        return *j;
    }

private:
    const json& obj_;
    std::string path_;
    std::vector<Finding>& notes_;
    std::set<std::string> used_;
};

Quantity quantity_from_json(const json& j, const std::string& path) {
    try {
        if (j.is_string()) return parse_quantity(j.get<std::string>());
        if (j.is_number_integer() || j.is_number_unsigned()) return parse_quantity(j.dump());
        // shortest round-trip text of the double, so 0.6 reads as 3/5
        if (j.is_number_float()) return parse_quantity(j.dump());
    } catch (const Error& e) {
        schema_error(path, e.what());
    }
    schema_error(path, "expected number or decimal string, found " + type_name(j));
}

std::optional<Quantity> ObjectReader::quantity(const std::string& key, bool is_required) {
    const json* j = is_required ? &required(key) : optional(key);
    if (!j) return std::nullopt;
    return quantity_from_json(*j, child_path(key));
}

std::optional<std::int64_t> ObjectReader::integer(const std::string& key, bool is_required) {
    const json* j = is_required ? &required(key) : optional(key);
    if (!j) return std::nullopt;
    if (!j->is_number_integer()) schema_error(child_path(key), "expected integer, found " + type_name(*j));
    return j->get<std::int64_t>();
}

template <typename E, std::size_t N, std::size_t A>
std::vector<E> ObjectReader::enum_list(const std::string& key, const EnumNames<E, N, A>& names,
                                       std::string_view what) {
    const json& arr = array(key);
    std::vector<E> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = child_path(key) + "/" + std::to_string(i);
        if (!arr[i].is_string()) schema_error(p, "expected string, found " + type_name(arr[i]));
        E value = names.parse(arr[i].get<std::string>(), what, p);
        if (std::find(out.begin(), out.end(), value) != out.end()) schema_error(p, "duplicate entry");
        out.push_back(value);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> ObjectReader::string_list(const std::string& key) {
    const json& arr = array(key);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string())
            schema_error(child_path(key) + "/" + std::to_string(i), "expected string, found " + type_name(arr[i]));
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

std::string element_path(const ObjectReader& r, const std::string& key, std::size_t i) {
    return r.child_path(key) + "/" + std::to_string(i);
}

Incentives read_incentives(ObjectReader& r, std::vector<Finding>& notes) {
    Incentives inc;
    const json& stakeholders = r.array("stakeholders", true);
    for (std::size_t i = 0; i < stakeholders.size(); ++i) {
        ObjectReader s(stakeholders[i], element_path(r, "stakeholders", i), notes);
        Stakeholder st;
        st.name = s.string("name", true);
        st.category = s.enumeration("category", kCategoryNames, "stakeholder category");
        st.value_proposition = s.string("value_proposition");
        inc.stakeholders.push_back(std::move(st));
    }
    inc.functions = r.string_list("functions");
    const json& behaviors = r.array("desirable_behaviors");
    for (std::size_t i = 0; i < behaviors.size(); ++i) {
        ObjectReader b(behaviors[i], element_path(r, "desirable_behaviors", i), notes);
        inc.desirable_behaviors.push_back({b.string("stakeholder", true), b.string("behavior", true)});
    }
    const json& mechanisms = r.array("incentive_mechanisms");
    for (std::size_t i = 0; i < mechanisms.size(); ++i) {
        ObjectReader m(mechanisms[i], element_path(r, "incentive_mechanisms", i), notes);
        IncentiveMechanism mech;
        mech.type = m.enumeration("type", kIncentiveTypeNames, "incentive mechanism type");
        mech.incentive_class = m.enumeration("class", kIncentiveClassNames, "incentive class");
        mech.targets = m.string_list("targets");
        mech.label = m.string("label");
        inc.mechanisms.push_back(std::move(mech));
    }
    return inc;
}

governance::VotingMechanism read_mechanism(ObjectReader& m, std::string& note) {
    governance::VotingMechanism mech;
    mech.family = m.enumeration("family", governance::kFamilyNames, "voting mechanism family");
    note = m.string("note");
    const bool conviction = mech.family == governance::Family::conviction;
    const bool escrow = mech.family == governance::Family::vote_escrow;
    const bool quadratic = mech.family == governance::Family::quadratic;

    if (conviction) {
        if (auto a = m.quantity("conviction_alpha")) mech.params.conviction_alpha = *a;
    } else {
        m.mark_ignored("conviction_alpha", "only used by conviction voting");
    }
    if (escrow) {
        if (auto l = m.integer("lock_max")) mech.params.lock_max = *l;
        if (auto s = m.quantity("stake_scale")) mech.params.stake_scale = *s;
    } else {
        m.mark_ignored("lock_max", "only used by vote-escrow");
        m.mark_ignored("stake_scale", "only used by vote-escrow");
    }
    if (quadratic) {
        mech.params.credit_budget = m.quantity("credit_budget");
    } else {
        m.mark_ignored("credit_budget", "only used by quadratic voting");
    }
    try {
        mech.check();
    } catch (const Error& e) {
        schema_error(m.path(), e.what());
    }
    return mech;
}

Governance read_governance(ObjectReader& r, std::vector<Finding>& notes) {
    Governance gov;
    gov.areas = r.enum_list("areas", governance::kAreaNames, "governance area");
    gov.areas_note = r.string("areas_note");

    const json& roles = r.array("roles");
    for (std::size_t i = 0; i < roles.size(); ++i) {
        ObjectReader ro(roles[i], element_path(r, "roles", i), notes);
        gov.roles.push_back({ro.string("stakeholder", true), ro.string("role", true)});
    }

    gov.decentralization_target = r.enumeration("decentralization_target", kTargetNames, "decentralization target");
    gov.decentralization_note = r.string("decentralization_note");
    gov.max_gini = r.quantity("max_gini");
    if (auto n = r.integer("min_nakamoto")) gov.min_nakamoto = static_cast<int>(*n);

    if (const json* venues = r.optional("onchain_offchain")) {
        ObjectReader v(*venues, r.child_path("onchain_offchain"), notes);
        for (auto it = venues->begin(); it != venues->end(); ++it) {
            const std::string p = v.child_path(it.key());
            auto area = governance::kAreaNames.parse(it.key(), "governance area", p);
            v.optional(it.key());
            if (!it->is_string()) schema_error(p, "expected string, found " + type_name(*it));
            gov.venues[area] = kVenueNames.parse(it->get<std::string>(), "venue", p);
        }
    }

    if (const json* req = r.optional("required_properties")) {
        ObjectReader q(*req, r.child_path("required_properties"), notes);
        for (auto it = req->begin(); it != req->end(); ++it) {
            const std::string p = q.child_path(it.key());
            auto property = governance::kPropertyNames.parse(it.key(), "voting property", p);
            q.optional(it.key());
            if (!it->is_number_integer() || it->get<int>() < 0 || it->get<int>() > 2)
                schema_error(p, "required level must be an integer 0, 1 or 2");
            gov.required_properties[property] = it->get<int>();
        }
    }

    {
        ObjectReader m(r.required("chosen_mechanism"), r.child_path("chosen_mechanism"), notes);
        gov.chosen_mechanism = read_mechanism(m, gov.mechanism_note);
    }
    gov.support_mechanisms = r.enum_list("support_mechanisms", kSupportNames, "support mechanism");
    return gov;
}

supply::VestingSchedule read_vesting(ObjectReader& v) {
    supply::VestingSchedule s;
    s.total = *v.quantity("total", true);
    s.start_epoch = v.integer("start_epoch").value_or(0);
    s.cliff_epochs = v.integer("cliff_epochs").value_or(0);
    s.duration_epochs = *v.integer("duration_epochs", true);
    try {
        s.check();
    } catch (const Error& e) {
        schema_error(v.path(), e.what());
    }
    return s;
}

Token read_token(ObjectReader& r, std::vector<Finding>& notes) {
    Token t;
    t.symbol = r.string("symbol", true);
    t.illustrative = r.boolean("illustrative", false);
    {
        ObjectReader p(r.required("supply_policy"), r.child_path("supply_policy"), notes);
        auto kind = p.string("kind", true);
        const supply::SupplyKind parsed =
            EnumNames<supply::SupplyKind, 2, 2>{
                {{{supply::SupplyKind::capped, "capped"}, {supply::SupplyKind::uncapped, "uncapped"}}},
                {{{supply::SupplyKind::capped, "deflationary"}, {supply::SupplyKind::uncapped, "inflationary"}}}}
                .parse(kind, "supply kind", p.child_path("kind"));
        t.supply_policy.kind = parsed;
        t.supply_policy.s_max = p.quantity("s_max");
        t.supply_policy.inflationary_constraint = p.boolean("inflationary_constraint", false);
        t.annual_inflation = p.quantity("annual_inflation");
        t.supply_note = p.string("note");
    }
    if (const json* plan = r.optional("mint_plan")) {
        ObjectReader mp(*plan, r.child_path("mint_plan"), notes);
        MintPlan m;
        m.initial_supply = *mp.quantity("initial_supply", true);
        m.per_epoch = *mp.quantity("per_epoch", true);
        m.epochs = *mp.integer("epochs", true);
        if (m.epochs < 0 || m.per_epoch < 0 || m.initial_supply < 0)
            schema_error(mp.path(), "mint plan values must be non-negative");
        t.mint_plan = std::move(m);
    }
    t.timing = r.enumeration("timing", kTimingNames, "timing strategy");

    const json& dist = r.array("distribution");
    for (std::size_t i = 0; i < dist.size(); ++i) {
        ObjectReader a(dist[i], element_path(r, "distribution", i), notes);
        Allocation alloc;
        alloc.channel = a.enumeration("channel", kChannelNames, "distribution channel");
        alloc.share = *a.quantity("share", true);
        alloc.label = a.string("label");
        if (const json* v = a.optional("vesting")) {
            ObjectReader vr(*v, a.child_path("vesting"), notes);
            alloc.vesting = read_vesting(vr);
        }
        t.distribution.push_back(std::move(alloc));
    }
    t.distribution_note = r.string("distribution_note");
    t.value_capture = r.enum_list("value_capture", kValueCaptureNames, "value-capture channel");
    t.value_note = r.string("value_capture_note");
    t.price_management = r.enum_list("price_management", kPriceLeverNames, "price-management mechanism");
    t.price_note = r.string("price_management_note");
    return t;
}

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ParsedSpec parse_spec_json(const json& document) {
    ParsedSpec out;
    std::vector<Finding>& notes = out.notes;
    {
        ObjectReader root(document, "", notes);
        auto version = root.integer("tedm_version", true);
        if (*version > kSchemaVersion)
            notes.push_back({Severity::warning, "F2",
                             "document declares tedm_version " + std::to_string(*version) + "; reading as version " +
                                 std::to_string(kSchemaVersion),
                             "/tedm_version"});
        else if (*version < 1)
            schema_error("/tedm_version", "tedm_version must be >= 1");
        out.spec.tedm_version = kSchemaVersion;
        out.spec.name = root.string("name", true);
        {
            ObjectReader inc(root.required("incentives"), "/incentives", notes);
            out.spec.incentives = read_incentives(inc, notes);
        }
        {
            ObjectReader gov(root.required("governance"), "/governance", notes);
            out.spec.governance = read_governance(gov, notes);
        }
        {
            ObjectReader tok(root.required("tokenomics"), "/tokenomics", notes);
            const json& tokens = tok.array("tokens", true);
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                ObjectReader t(tokens[i], element_path(tok, "tokens", i), notes);
                out.spec.tokens.push_back(read_token(t, notes));
            }
        }
    }
    std::sort(notes.begin(), notes.end());
    return out;
}

governance::VotingMechanism parse_mechanism_json(const json& document, const std::string& path,
                                                 std::vector<Finding>* notes) {
    std::vector<Finding> scratch;
    std::string note;
    governance::VotingMechanism mech;
    {
        ObjectReader m(document, path, notes ? *notes : scratch);
        mech = read_mechanism(m, note);
    }
    return mech;
}

ParsedSpec parse_spec(std::string_view document) {
    json parsed;
    try {
        parsed = json::parse(document.begin(), document.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what(), line_col(document, e.byte));
    }
    return parse_spec_json(parsed);
}

// ---------------------------------------------------------------------------
// Writing

namespace {

template <typename E, std::size_t N, std::size_t A>
json enum_array(const std::vector<E>& values, const EnumNames<E, N, A>& names) {
    json arr = json::array();
    for (E v : values) arr.push_back(std::string(names.name(v)));
    return arr;
}

void put_note(json& obj, const char* key, const std::string& note) {
    if (!note.empty()) obj[key] = note;
}

json to_json(const supply::VestingSchedule& v) {
    return {{"total", exact_string(v.total)},
            {"start_epoch", v.start_epoch},
            {"cliff_epochs", v.cliff_epochs},
            {"duration_epochs", v.duration_epochs}};
}

json to_json(const governance::VotingMechanism& m, const std::string& note) {
    json j = {{"family", std::string(governance::kFamilyNames.name(m.family))}};
    switch (m.family) {
        case governance::Family::conviction:
            j["conviction_alpha"] = exact_string(m.params.conviction_alpha);
            break;
        case governance::Family::vote_escrow:
            j["lock_max"] = m.params.lock_max;
            j["stake_scale"] = exact_string(m.params.stake_scale);
            break;
        case governance::Family::quadratic:
            if (m.params.credit_budget) j["credit_budget"] = exact_string(*m.params.credit_budget);
            break;
        default:
            break;
    }
    put_note(j, "note", note);
    return j;
}

json to_json(const Token& t) {
    json j;
    j["symbol"] = t.symbol;
    if (t.illustrative) j["illustrative"] = true;

    json policy = {{"kind", t.supply_policy.kind == supply::SupplyKind::capped ? "capped" : "uncapped"}};
    if (t.supply_policy.s_max) policy["s_max"] = exact_string(*t.supply_policy.s_max);
    if (t.supply_policy.inflationary_constraint) policy["inflationary_constraint"] = true;
    if (t.annual_inflation) policy["annual_inflation"] = exact_string(*t.annual_inflation);
    put_note(policy, "note", t.supply_note);
    j["supply_policy"] = policy;

    if (t.mint_plan)
        j["mint_plan"] = {{"initial_supply", exact_string(t.mint_plan->initial_supply)},
                          {"per_epoch", exact_string(t.mint_plan->per_epoch)},
                          {"epochs", t.mint_plan->epochs}};
    j["timing"] = std::string(kTimingNames.name(t.timing));

    json dist = json::array();
    for (const auto& a : t.distribution) {
        json e = {{"channel", std::string(kChannelNames.name(a.channel))}, {"share", exact_string(a.share)}};
        put_note(e, "label", a.label);
        if (a.vesting) e["vesting"] = to_json(*a.vesting);
        dist.push_back(std::move(e));
    }
    j["distribution"] = std::move(dist);
    put_note(j, "distribution_note", t.distribution_note);
    j["value_capture"] = enum_array(t.value_capture, kValueCaptureNames);
    put_note(j, "value_capture_note", t.value_note);
    j["price_management"] = enum_array(t.price_management, kPriceLeverNames);
    put_note(j, "price_management_note", t.price_note);
    return j;
}

}  // namespace

json to_json(const EconomySpec& spec) {
    json j;
    j["tedm_version"] = spec.tedm_version;
    j["name"] = spec.name;

    const auto& inc = spec.incentives;
    json stakeholders = json::array();
    for (const auto& s : inc.stakeholders) {
        json e = {{"name", s.name}, {"category", std::string(kCategoryNames.name(s.category))}};
        put_note(e, "value_proposition", s.value_proposition);
        stakeholders.push_back(std::move(e));
    }
    json behaviors = json::array();
    for (const auto& b : inc.desirable_behaviors)
        behaviors.push_back({{"stakeholder", b.stakeholder}, {"behavior", b.behavior}});
    json mechanisms = json::array();
    for (const auto& m : inc.mechanisms) {
        json e = {{"type", std::string(kIncentiveTypeNames.name(m.type))},
                  {"class", std::string(kIncentiveClassNames.name(m.incentive_class))},
                  {"targets", m.targets}};
        put_note(e, "label", m.label);
        mechanisms.push_back(std::move(e));
    }
    j["incentives"] = {{"stakeholders", stakeholders},
                       {"functions", inc.functions},
                       {"desirable_behaviors", behaviors},
                       {"incentive_mechanisms", mechanisms}};

    const auto& gov = spec.governance;
    json g;
    g["areas"] = enum_array(gov.areas, governance::kAreaNames);
    put_note(g, "areas_note", gov.areas_note);
    json roles = json::array();
    for (const auto& r : gov.roles) roles.push_back({{"stakeholder", r.stakeholder}, {"role", r.role}});
    g["roles"] = roles;
    g["decentralization_target"] = std::string(kTargetNames.name(gov.decentralization_target));
    put_note(g, "decentralization_note", gov.decentralization_note);
    if (gov.max_gini) g["max_gini"] = exact_string(*gov.max_gini);
    if (gov.min_nakamoto) g["min_nakamoto"] = *gov.min_nakamoto;
    json venues = json::object();
    for (const auto& [area, venue] : gov.venues)
        venues[std::string(governance::kAreaNames.name(area))] = std::string(kVenueNames.name(venue));
    g["onchain_offchain"] = venues;
    json required = json::object();
    for (const auto& [property, level] : gov.required_properties)
        required[std::string(governance::kPropertyNames.name(property))] = level;
    g["required_properties"] = required;
    g["chosen_mechanism"] = to_json(gov.chosen_mechanism, gov.mechanism_note);
    g["support_mechanisms"] = enum_array(gov.support_mechanisms, kSupportNames);
    j["governance"] = std::move(g);

    json tokens = json::array();
    for (const auto& t : spec.tokens) tokens.push_back(to_json(t));
    j["tokenomics"] = {{"tokens", tokens}};
    return j;
}

std::string normalize_and_serialize(const EconomySpec& spec) {
    return to_json(spec).dump(2, ' ', false) + "\n";
}

json to_json(const Finding& f) {
    return {{"severity", std::string(kSeverityNames.name(f.severity))},
            {"rule", f.rule},
            {"message", f.message},
            {"path", f.path}};
}

json to_json(const ValidationReport& report) {
    json findings = json::array();
    for (const auto& f : report.findings) findings.push_back(to_json(f));
    return {{"valid", report.valid()},
            {"errors", report.count(Severity::error)},
            {"warnings", report.count(Severity::warning)},
            {"findings", findings}};
}

}  // namespace tedm::spec
