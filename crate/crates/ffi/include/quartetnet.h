#ifndef QUARTETNET_H
#define QUARTETNET_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QnStatus {
  QN_STATUS_OK = 0,
  // A required pointer argument was null.
  QN_STATUS_ERR_NULL = 1,
  // A string argument was not valid UTF-8.
  QN_STATUS_ERR_UTF8 = 2,
  // Input text could not be parsed.
  QN_STATUS_ERR_PARSE = 3,
  // Arguments were well formed but unusable, such as an unknown anchor.
  QN_STATUS_ERR_INVALID = 4,
  // The quartets admit no network; the result carries a certificate.
  QN_STATUS_INCONSISTENT = 5,
  // The quartets do not determine a network; the result names a 4-set.
  QN_STATUS_WITNESS = 6,
  // Fast mode rejected the input.
  QN_STATUS_NOT_LEVEL1_LIKE = 7,
  QN_STATUS_ERR_INTERNAL = 8,
} QnStatus;

typedef enum QnMode {
  QN_MODE_AUTO = 0,
  QN_MODE_GENERAL = 1,
  QN_MODE_FAST = 2,
} QnMode;

typedef struct QnNetwork QnNetwork;

// A set of quartets together with the taxon names they use.
typedef struct QnQuartetSet QnQuartetSet;

// The outcome of a reconstruction.
typedef struct QnResult QnResult;

// Message describing the most recent error on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *qn_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library.
void qn_string_free(char *s);

// Parses quartet lines `a b | c d`. Taxa are numbered in order of first
// appearance.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum QnStatus qn_quartets_parse(const char *text, struct QnQuartetSet **out);

// Parses quartets over a fixed list of `count` taxon names; any other name
// is a parse error.
//
// # Safety
// `names` must point to `count` NUL-terminated strings.
enum QnStatus qn_quartets_parse_with_taxa(const char *text,
                                          const char *const *names,
                                          uintptr_t count,
                                          struct QnQuartetSet **out);

// # Safety
// `set` must be null or a handle from this library, not yet freed.
void qn_quartets_free(struct QnQuartetSet *set);

// Number of distinct quartets, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
uintptr_t qn_quartets_len(const struct QnQuartetSet *set);

// # Safety
// `set` must be null or a live handle.
uintptr_t qn_quartets_num_taxa(const struct QnQuartetSet *set);

// Writes the quartets, one per line.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum QnStatus qn_quartets_write(const struct QnQuartetSet *set, char **out);

// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum QnStatus qn_network_parse(const char *text, struct QnNetwork **out);

// Random network on `n` taxa; each admissible split is kept with
// probability `p_split`.
//
// # Safety
// `out` must be a valid pointer.
enum QnStatus qn_network_generate(uintptr_t n,
                                  double p_split,
                                  uint64_t seed,
                                  struct QnNetwork **out);

// # Safety
// `net` must be null or a handle from this library, not yet freed.
void qn_network_free(struct QnNetwork *net);

// # Safety
// `net` must be null or a live handle.
uintptr_t qn_network_num_taxa(const struct QnNetwork *net);

// # Safety
// `net` must be a live handle and `out` a valid pointer.
enum QnStatus qn_network_write(const struct QnNetwork *net, char **out);

// # Safety
// `net` must be a live handle and `out` a valid pointer.
enum QnStatus qn_network_write_dot(const struct QnNetwork *net, char **out);

// Quartets displayed by the network; only those containing `anchor` when
// it is non-null.
//
// # Safety
// `net` must be a live handle, `anchor` null or a NUL-terminated string,
// `out` a valid pointer.
enum QnStatus qn_network_quartets(const struct QnNetwork *net,
                                  const char *anchor,
                                  struct QnQuartetSet **out);

// `Ok` if the network displays every quartet, `Inconsistent` otherwise.
// `missing`, when non-null, receives the number not displayed.
//
// # Safety
// `net` and `set` must be live handles; `missing` null or valid.
enum QnStatus qn_network_verify(const struct QnNetwork *net,
                                const struct QnQuartetSet *set,
                                uintptr_t *missing);

// 1 if both networks have the same taxa, splits and quartets, else 0.
//
// # Safety
// `a` and `b` must be null or live handles.
int32_t qn_network_equal(const struct QnNetwork *a, const struct QnNetwork *b);

// Reconstructs a network from `set`. The anchor defaults to the first
// taxon when null. Returns the outcome status; for `Ok`, `Inconsistent`,
// `Witness` and `NotLevel1Like` a result handle is stored in `out`.
//
// # Safety
// `set` must be a live handle, `anchor` null or a NUL-terminated string,
// `out` a valid pointer.
enum QnStatus qn_reconstruct(const struct QnQuartetSet *set,
                             const char *anchor,
                             enum QnMode mode,
                             bool verify,
                             struct QnResult **out);

// # Safety
// `res` must be null or a handle from this library, not yet freed.
void qn_result_free(struct QnResult *res);

// # Safety
// `res` must be null or a live handle.
enum QnStatus qn_result_status(const struct QnResult *res);

// The reconstructed network, borrowed from the result; null unless the
// status is `Ok`.
//
// # Safety
// `res` must be null or a live handle. The returned pointer is valid until
// the result is freed.
const struct QnNetwork *qn_result_network(const struct QnResult *res);

// Copies the certificate of an inconsistent result into a new set.
//
// # Safety
// `res` must be a live handle and `out` a valid pointer.
enum QnStatus qn_result_certificate(const struct QnResult *res, struct QnQuartetSet **out);

// The witness 4-set as space-separated names.
//
// # Safety
// `res` must be a live handle and `out` a valid pointer.
enum QnStatus qn_result_witness(const struct QnResult *res, char **out);

// Human-readable detail for inconsistent or rejected results.
//
// # Safety
// `res` must be a live handle and `out` a valid pointer.
enum QnStatus qn_result_message(const struct QnResult *res, char **out);

// Dimension of the solution space, or -1 when no network was built.
//
// # Safety
// `res` must be null or a live handle.
int64_t qn_result_dimension(const struct QnResult *res);

// Dimension of the space spanned by the network's splits, or -1.
//
// # Safety
// `res` must be null or a live handle.
int64_t qn_result_split_dimension(const struct QnResult *res);

#endif  /* QUARTETNET_H */
