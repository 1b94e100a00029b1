#ifndef POLISOG_POLISOG_H
#define POLISOG_POLISOG_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(POLISOG_BUILDING_LIBRARY)
#define POLISOG_API __attribute__((visibility("default")))
#else
#define POLISOG_API
#endif

/* Return codes.  POLISOG_NEGATIVE means the computation finished and the
 * answer is negative (not isometric, not equivalent, nothing found). */
#define POLISOG_OK 0
#define POLISOG_NEGATIVE 2
#define POLISOG_ERR_SCHEMA 10
#define POLISOG_ERR_PRECONDITION 11
#define POLISOG_ERR_UNDEFINED 12
#define POLISOG_ERR_RESOURCE 13
#define POLISOG_ERR_UNSUPPORTED 14
#define POLISOG_ERR_INTERNAL 15

typedef struct polisog_session polisog_session;

POLISOG_API const char* polisog_version(void);

POLISOG_API polisog_session* polisog_session_new(void);
POLISOG_API void polisog_session_free(polisog_session* s);

POLISOG_API int polisog_set_seed(polisog_session* s, unsigned long long seed);
/* p-adic precision, 1..1000. */
POLISOG_API int polisog_set_precision(polisog_session* s, int precision);
/* Rational "n" or "n/d"; NULL clears the cap. */
POLISOG_API int polisog_set_norm_cap(polisog_session* s, const char* cap);
/* Height bound for isometry witness searches, 1..10. */
POLISOG_API int polisog_set_height(polisog_session* s, int height);

/* Comma-separated list of verbs. */
POLISOG_API const char* polisog_verbs(void);

/* Runs verb on a JSON input.  *out receives a JSON document (result or
 * error) to be released with polisog_string_free.  Returns a code above. */
POLISOG_API int polisog_run(polisog_session* s, const char* verb, const char* input_json, char** out);

/* verb may be NULL, in which case the input's "verb" key is used.
 * Writes {"verb", "valid", "errors"} to *out; returns 0 if valid, else
 * POLISOG_ERR_SCHEMA or the first error code found. */
POLISOG_API int polisog_validate(const char* verb, const char* input_json, char** out);

POLISOG_API int polisog_last_error_code(const polisog_session* s);
POLISOG_API const char* polisog_last_error_message(const polisog_session* s);

POLISOG_API void polisog_string_free(char* str);

#ifdef __cplusplus
}
#endif

#endif
