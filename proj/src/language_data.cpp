#include "tweetmine/language.hpp"

namespace tweetmine {

// Rank-ordered lists of frequent function and content words per language.
const std::vector<std::pair<std::string, std::vector<std::string>>>& builtin_word_lists() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> lists = {
      {"en",
       {"the", "of", "and", "to", "a", "in", "is", "you", "that", "it", "he", "was", "for", "on",
        "are", "as", "with", "his", "they", "i", "at", "be", "this", "have", "from", "or", "one",
        "had", "by", "word", "but", "not", "what", "all", "were", "we", "when", "your", "can",
        "said", "there", "use", "an", "each", "which", "she", "do", "how", "their", "if", "will",
        "up", "other", "about", "out", "many", "then", "them", "these", "so", "some", "her",
        "would", "make", "like", "him", "into", "time", "has", "look", "two", "more", "write",
        "go", "see", "number", "no", "way", "could", "people", "my", "than", "first", "water",
        "been", "call", "who", "oil", "its", "now", "find", "long", "down", "day", "did", "get",
        "come", "made", "may", "part", "over", "new", "sound", "take", "only", "little", "work",
        "know", "place", "year", "live", "me", "back", "give", "most", "very", "after", "thing",
        "our", "just", "name", "good", "sentence", "man", "think", "say", "great", "where", "help",
        "through", "much", "before", "line", "right", "too", "mean", "old", "any", "same", "tell",
        "boy", "follow", "came", "want", "show", "also", "around", "form", "three", "small", "set",
        "put", "end", "does", "another", "well", "large", "must", "big", "even", "such", "because",
        "turn", "here", "why", "ask", "went", "men", "read", "need", "land", "different", "home",
        "us", "move", "try", "kind", "hand", "picture", "again", "change", "off", "play", "spell",
        "air", "away", "animal", "house", "point", "page", "letter", "mother", "answer", "found",
        "study", "still", "learn", "should", "world", "high", "every", "near", "add", "food",
        "between", "own", "below", "country", "plant", "last", "school", "father", "keep", "tree",
        "never", "start", "city", "earth", "eye", "light", "thought", "head", "under", "story",
        "saw", "left", "few", "while", "along", "might", "close", "something", "seem", "next",
        "hard", "open", "example", "begin", "life", "always", "those", "both", "paper", "together",
        "got", "group", "often", "run", "important", "until", "children", "side", "feet", "car",
        "love", "peace", "today", "happy", "thanks", "really", "going", "being", "our", "news"}},
      {"sw",
       {"na", "ya", "wa", "kwa", "ni", "katika", "la", "za", "kuwa", "hii", "yake", "cha", "huo",
        "hiyo", "watu", "sana", "lakini", "au", "pia", "mimi", "wewe", "yeye", "sisi", "wao",
        "hapa", "leo", "kesho", "jana", "amani", "mungu", "asante", "habari", "nzuri", "kwamba",
        "hata", "bado", "tu", "kama", "kila", "baada", "kabla", "wakati", "serikali", "nchi",
        "kenya", "sasa", "hakuna", "kuna", "sisi", "wote", "moja", "mbili", "tatu", "nyumba",
        "mtu", "mtoto", "watoto", "mama", "baba", "rafiki", "ndugu", "upendo", "umoja", "pamoja",
        "tafadhali", "ndiyo", "hapana", "nini", "nani", "wapi", "lini", "vipi", "kwanini",
        "kazi", "shule", "maji", "chakula", "siku", "mwaka", "mwezi", "wiki", "saa", "asubuhi",
        "jioni", "usiku", "mvua", "jua", "njia", "gari", "mji", "kijiji", "soko", "duka", "pesa",
        "shilingi", "bei", "kubwa", "ndogo", "mpya", "zamani", "vizuri", "mbaya", "salama",
        "polisi", "wanajeshi", "shambulio", "waliouawa", "waathiriwa", "maombi", "tuombe",
        "tunaomba", "pole", "rambirambi", "familia", "wananchi", "taifa", "viongozi", "rais",
        "bunge", "sheria", "haki", "usalama", "vita", "ugaidi", "dini", "waislamu", "wakristo",
        "kanisa", "msikiti", "jamii", "kabila", "makabila", "hali", "jambo", "mambo", "kitu",
        "vitu", "sema", "alisema", "wamesema", "anasema", "kusema", "kufanya", "kwenda", "kuja",
        "kuona", "kujua", "kupata", "kutaka", "kupenda", "kusaidia", "kulinda", "tunahitaji",
        "tuungane", "wetu", "yetu", "letu", "zetu", "wenu", "yao", "zao", "huyu", "hawa", "ile"}},
      {"fr",
       {"de", "la", "le", "et", "les", "des", "en", "un", "du", "une", "que", "est", "pour", "qui",
        "dans", "par", "plus", "pas", "au", "sur", "ne", "se", "ce", "il", "sont", "avec", "nous",
        "vous", "mais", "ou", "son", "aux", "elle", "cette", "comme", "tout", "ont", "leur",
        "été", "être", "fait", "bien", "aussi", "ses", "sans", "peut", "très", "deux", "entre",
        "avoir", "même", "faire", "ils", "notre", "votre", "où", "après", "avant", "encore",
        "toujours", "paix", "merci", "bonjour", "aujourd", "hui", "gens", "pays", "monde", "jour",
        "temps", "année", "homme", "femme", "enfant", "ville", "maison", "travail", "vie", "amour",
        "ensemble", "contre", "depuis", "quand", "chez", "donc", "alors", "rien", "quelque",
        "chose", "autre", "grand", "petit", "nouveau", "premier", "dernier", "gouvernement"}},
      {"es",
       {"de", "la", "que", "el", "en", "y", "a", "los", "se", "del", "las", "un", "por", "con",
        "no", "una", "su", "para", "es", "al", "lo", "como", "más", "pero", "sus", "le", "ya",
        "o", "este", "sí", "porque", "esta", "entre", "cuando", "muy", "sin", "sobre", "también",
        "me", "hasta", "hay", "donde", "quien", "desde", "todo", "nos", "durante", "todos", "uno",
        "les", "ni", "contra", "otros", "ese", "eso", "ante", "ellos", "esto", "mí", "antes",
        "algunos", "qué", "unos", "yo", "otro", "otras", "otra", "él", "tanto", "esa", "estos",
        "mucho", "quienes", "nada", "muchos", "cual", "poco", "ella", "estar", "estas", "paz",
        "gracias", "hoy", "gente", "país", "mundo", "día", "tiempo", "año", "hombre", "mujer",
        "niño", "ciudad", "casa", "trabajo", "vida", "amor", "juntos", "gobierno", "nuevo"}},
      {"de",
       {"der", "die", "und", "in", "den", "von", "zu", "das", "mit", "sich", "des", "auf", "für",
        "ist", "im", "dem", "nicht", "ein", "eine", "als", "auch", "es", "an", "werden", "aus",
        "er", "hat", "dass", "sie", "nach", "wird", "bei", "einer", "um", "am", "sind", "noch",
        "wie", "einem", "über", "einen", "so", "zum", "war", "haben", "nur", "oder", "aber",
        "vor", "zur", "bis", "mehr", "durch", "man", "sein", "wurde", "sei", "wir", "ich", "du",
        "ihr", "uns", "euch", "schon", "wenn", "kann", "heute", "immer", "gegen", "zwischen",
        "frieden", "danke", "leute", "land", "welt", "tag", "zeit", "jahr", "mann", "frau",
        "kind", "stadt", "haus", "arbeit", "leben", "liebe", "zusammen", "regierung", "neue",
        "gut", "sehr", "viel", "alle", "diese", "dieser", "gibt", "geht", "machen", "sagen"}},
  };
  return lists;
}

}  // namespace tweetmine
