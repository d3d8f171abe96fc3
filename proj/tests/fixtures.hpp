#pragma once

// Shared test structures. Each builder returns a freshly validated
// structure so tests can mutate copies freely.

#include "ra/structure.hpp"

namespace fixtures {

// Two-sorted ownership world: 5 persons, 7 owned tickets, John owns none.
inline ra::Structure ticket_world() {
  ra::Vocabulary v;
  v.sorts = {"Person", "Ticket"};
  v.relations = {{"Owns", {"Person", "Ticket"}}};
  v.constants = {{"John", "Person"}};
  ra::RawStructure raw;
  ra::SortCarrier persons;
  persons.kind = ra::SortCarrier::Kind::Explicit;
  persons.elements = {"John", "Donna", "alice", "bob", "carol"};
  ra::SortCarrier tickets;
  tickets.kind = ra::SortCarrier::Kind::Explicit;
  tickets.elements = {"t1", "t2", "t3", "t4", "t5", "t6", "t7"};
  raw.carriers = {{"Person", persons}, {"Ticket", tickets}};
  raw.relation_tuples["Owns"] = {{"Donna", "t1"}, {"Donna", "t2"},
                                 {"Donna", "t3"}, {"alice", "t4"},
                                 {"bob", "t5"},   {"bob", "t6"},
                                 {"carol", "t7"}};
  raw.constant_values = {{"John", "John"}};
  return ra::validate_or_throw(v, raw);
}

// One-sorted lottery world used for synthesis: winner, relatives, friends,
// others, with the winner's spouse Donna among the relatives.
inline ra::Structure lottery_world() {
  ra::Vocabulary v;
  v.sorts = {"Person"};
  v.relations = {{"CloseRelativeOfJohn", {"Person"}},
                 {"CloseFriendOfJohn", {"Person"}}};
  v.constants = {{"John", "Person"}};
  ra::RawStructure raw;
  ra::SortCarrier persons;
  persons.kind = ra::SortCarrier::Kind::Explicit;
  persons.elements = {"John", "Donna", "rel2", "rel3", "fr1",
                      "fr2",  "fr3",   "oth1", "oth2", "oth3"};
  raw.carriers = {{"Person", persons}};
  raw.relation_tuples["CloseRelativeOfJohn"] = {{"Donna"}, {"rel2"}, {"rel3"}};
  raw.relation_tuples["CloseFriendOfJohn"] = {{"fr1"}, {"fr2"}, {"fr3"}};
  raw.constant_values = {{"John", "John"}};
  return ra::validate_or_throw(v, raw);
}

// Ten restaurant nights, each either a hit ("1") or not ("0").
inline ra::Structure stalking_world() {
  ra::Vocabulary v;
  v.sorts = {"Night", "Bit", "Outcome"};
  ra::RelationDecl app;
  app.name = "R";
  app.arg_sorts = {"Outcome", "Night"};
  app.builtin = ra::BuiltinKind::Application;
  app.success_value = "1";
  v.relations = {app};
  ra::RawStructure raw;
  ra::SortCarrier nights;
  nights.kind = ra::SortCarrier::Kind::IntRange;
  nights.lo = 1;
  nights.hi = 10;
  ra::SortCarrier bits;
  bits.kind = ra::SortCarrier::Kind::Explicit;
  bits.elements = {"0", "1"};
  ra::SortCarrier outcomes;
  outcomes.kind = ra::SortCarrier::Kind::Functions;
  outcomes.index_sort = "Night";
  outcomes.value_sort = "Bit";
  raw.carriers = {{"Night", nights}, {"Bit", bits}, {"Outcome", outcomes}};
  return ra::validate_or_throw(v, raw);
}

// 41 drawings, each giving the top ballot line to party D or N.
inline ra::Structure ballot_world(int drawings = 41) {
  ra::Vocabulary v;
  v.sorts = {"Drawing", "Party", "Outcome"};
  ra::RelationDecl app;
  app.name = "R";
  app.arg_sorts = {"Outcome", "Drawing", "Party"};
  app.builtin = ra::BuiltinKind::Application;
  v.relations = {app};
  v.constants = {{"D", "Party"}, {"N", "Party"}};
  ra::RawStructure raw;
  ra::SortCarrier d;
  d.kind = ra::SortCarrier::Kind::IntRange;
  d.lo = 1;
  d.hi = drawings;
  ra::SortCarrier party;
  party.kind = ra::SortCarrier::Kind::Explicit;
  party.elements = {"D", "N"};
  ra::SortCarrier outcomes;
  outcomes.kind = ra::SortCarrier::Kind::Functions;
  outcomes.index_sort = "Drawing";
  outcomes.value_sort = "Party";
  raw.carriers = {{"Drawing", d}, {"Party", party}, {"Outcome", outcomes}};
  raw.constant_values = {{"D", "D"}, {"N", "N"}};
  return ra::validate_or_throw(v, raw);
}

// Shrunk jury world: 8 persons, 2 grand-jury members, pools of size 3.
inline ra::Structure jury_world_small() {
  ra::Vocabulary v;
  v.sorts = {"Person", "Member", "Pool"};
  ra::RelationDecl in;
  in.name = "In";
  in.arg_sorts = {"Member", "Pool"};
  in.builtin = ra::BuiltinKind::Membership;
  v.relations = {in};
  ra::RawStructure raw;
  ra::SortCarrier persons;
  persons.kind = ra::SortCarrier::Kind::Explicit;
  persons.elements = {"m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8"};
  ra::SortCarrier members;
  members.kind = ra::SortCarrier::Kind::Explicit;
  members.elements = {"m1", "m2"};
  ra::SortCarrier pools;
  pools.kind = ra::SortCarrier::Kind::Subsets;
  pools.base_sort = "Person";
  pools.subset_k = 3;
  raw.carriers = {{"Person", persons}, {"Member", members}, {"Pool", pools}};
  return ra::validate_or_throw(v, raw);
}

// Full-scale jury world: a million people, 100 members, pools of 50.
inline ra::Structure jury_world_full() {
  ra::Vocabulary v;
  v.sorts = {"Person", "Member", "Pool"};
  ra::RelationDecl in;
  in.name = "In";
  in.arg_sorts = {"Member", "Pool"};
  in.builtin = ra::BuiltinKind::Membership;
  v.relations = {in};
  ra::RawStructure raw;
  ra::SortCarrier persons;
  persons.kind = ra::SortCarrier::Kind::IntRange;
  persons.lo = 1;
  persons.hi = 1000000;
  ra::SortCarrier members;
  members.kind = ra::SortCarrier::Kind::IntRange;
  members.lo = 1;
  members.hi = 100;
  ra::SortCarrier pools;
  pools.kind = ra::SortCarrier::Kind::Subsets;
  pools.base_sort = "Person";
  pools.subset_k = 50;
  raw.carriers = {{"Person", persons}, {"Member", members}, {"Pool", pools}};
  return ra::validate_or_throw(v, raw);
}

}  // namespace fixtures
