#include <stdio.h>
#include <string.h>

#include "cyclic_rules.h"

static const char FIXTURE[] = "1\n0 1\n1 2 3\n0 1 2\n2\n0 1\n1 3\n0 1\n";

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  CrDatabase *db = NULL;
  CHECK(cr_abi_version() == CR_ABI_VERSION);
  CHECK(cr_database_parse((const uint8_t *)FIXTURE, strlen(FIXTURE), CR_FORMAT_FIMI, 1, &db) == CR_STATUS_OK);

  CrConstraints *cs = cr_constraints_new();
  uint32_t shortage = 1;
  CHECK(cr_constraints_set_conclusion(cs, &shortage, 1) == CR_STATUS_OK);
  CHECK(cr_constraints_add_aggregate(cs, "SUM(0)>=1") == CR_STATUS_OK);

  CrParams params = cr_params_default();
  params.nb_partitions = 2;
  CrRuleSet *rules = NULL;
  CHECK(cr_mine(db, CR_ALGORITHM_CBCAR, &params, cs, &rules) == CR_STATUS_OK);
  CHECK(cr_ruleset_len(rules) == 1);

  const uint32_t *items = NULL;
  size_t n = 0;
  CHECK(cr_rule_premise(rules, 0, &items, &n) == CR_STATUS_OK);
  CHECK(n == 1 && items[0] == 0);
  double support = 0, confidence = 0;
  CHECK(cr_rule_measures(rules, 0, &support, &confidence) == CR_STATUS_OK);
  CHECK(support == 0.5 && confidence == 1.0);

  char *json = cr_ruleset_to_json(rules);
  CHECK(json != NULL);
  printf("%s\n", json);
  cr_string_free(json);

  params.cycle_length = 9;
  CrRuleSet *none = NULL;
  CHECK(cr_mine(db, CR_ALGORITHM_PCAR, &params, NULL, &none) == CR_STATUS_INVALID_ARGUMENT);
  CHECK(none == NULL && cr_last_error_message() != NULL);

  cr_ruleset_free(rules);
  cr_constraints_free(cs);
  cr_database_free(db);
  return 0;
}
